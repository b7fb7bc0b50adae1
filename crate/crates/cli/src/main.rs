use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use walg::brst::build_brst;
use walg::fractional::{self, FracContext};
use walg::props;
use walg::report::CheckReport;
use walg::superalgebra::{builtin, load_algebra, parse_rational, AlgebraError, LieSuperalgebra};
use walg::table::{self, TableDoc};
use walg::text::render_diffpoly;
use walg::wred::{self, GeneratorFamily, ReductionContext, TableEntry};
use walg::zhufin::{self, FiniteW};
use walg::{HalfInt, LambdaBracket, Scalar};

#[derive(Parser)]
#[command(name = "walg", version, about = "Exact lambda-bracket computations for W-superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a Lie superalgebra definition
    VerifyAlgebra(Common),
    /// Verify the identities of the classical BRST complex
    BrstCheck(Common),
    /// List generators of the affine W-algebra with their invariance status
    WGens(Common),
    /// Bracket table of the affine W-algebra generators
    WBracket(Common),
    /// Finite W-algebra obtained by projection
    Zhu(Common),
    /// Generators of the fractional W-algebra at truncation t
    FracGens(Common),
    /// Bracket table and identities of the fractional W-algebra
    FracBracket(Common),
    /// Randomized skewsymmetry, Jacobi and normal-form suites
    Props(PropsArgs),
}

#[derive(Args)]
struct Common {
    /// builtin:<name> or file:<path>
    #[arg(long)]
    algebra: String,
    /// A rational level or `symbolic`
    #[arg(long, default_value = "symbolic")]
    k: String,
    /// Truncation parameter of the fractional commands
    #[arg(long, default_value_t = 1)]
    t: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Reference table to compare with, row by row
    #[arg(long)]
    golden: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PropsArgs {
    #[command(flatten)]
    common: Common,
    /// Random triples per bracket
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Random normal-form cases
    #[arg(long, default_value_t = 1000)]
    cases: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<bool, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(src: &str) -> Result<LieSuperalgebra, Failure> {
    let res = if let Some(name) = src.strip_prefix("builtin:") {
        builtin(name)
    } else if let Some(path) = src.strip_prefix("file:") {
        let body = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path, e)))?;
        load_algebra(&body)
    } else {
        return Err(usage(format!("--algebra expects builtin:<name> or file:<path>, got {:?}", src)));
    };
    res.map_err(|e| match e {
        AlgebraError::AxiomViolation { .. } | AlgebraError::DegenerateForm | AlgebraError::Grading(_) => {
            Failure::Check(e.to_string())
        }
        other => usage(other),
    })
}

fn level(src: &str) -> Result<Scalar, Failure> {
    if src == "symbolic" {
        Ok(Scalar::k())
    } else {
        parse_rational(src).map(Scalar::from_q).map_err(usage)
    }
}

fn print_reports(fmt: Format, reports: &[CheckReport]) {
    if fmt == Format::Json {
        println!("{}", serde_json::to_string_pretty(reports).expect("reports serialize"));
    } else {
        for r in reports {
            print!("{}", r);
        }
    }
}

fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed())
}

fn verify_algebra(c: &Common) -> Outcome {
    let alg = load(&c.algebra)?;
    let rep = alg.check_axioms();
    print_reports(c.format, std::slice::from_ref(&rep));
    Ok(rep.passed())
}

fn brst_check(c: &Common) -> Outcome {
    let alg = load(&c.algebra)?;
    let (sp, el) = build_brst(&alg, &level(&c.k)?);
    let rep = sp.check_all(&el);
    print_reports(c.format, std::slice::from_ref(&rep));
    Ok(rep.passed())
}

/// Closed forms for minimal nilpotents, the shipped reference family when
/// there is one, otherwise a linear-algebra search at rational level.
fn w_family(ctx: &ReductionContext) -> Result<GeneratorFamily, Failure> {
    let alg = ctx.algebra();
    if alg.is_minimal() {
        return wred::minimal_generators(ctx).map_err(usage);
    }
    if let Some(doc) = table::golden(alg.name()) {
        return doc.family(ctx).map_err(usage);
    }
    let found = wred::find_generators(ctx, HalfInt::from_int(3)).map_err(usage)?;
    let named = found.into_iter().map(|(l, e)| (l, e.representative().clone())).collect();
    wred::family_from_polys(ctx, named).map_err(usage)
}

fn w_gens(c: &Common) -> Outcome {
    let alg = load(&c.algebra)?;
    let ctx = ReductionContext::new(&alg, &level(&c.k)?);
    let fam = w_family(&ctx)?;
    let mut rep = CheckReport::new(format!("generators of W({}) at k = {}", alg.name(), ctx.level()));
    for (l, e) in fam.labels().iter().zip(fam.elements()) {
        let m = ctx.is_w_element(e.representative());
        let why = m.witness.map(|w| format!("ad_λ {} leaves {} at λ^{}", w.n, w.residual, w.degree));
        rep.record("invariance", l.clone(), why);
    }
    match c.format {
        Format::Json => {
            let gens: Vec<_> = fam
                .labels()
                .iter()
                .zip(fam.elements())
                .zip(&rep.entries)
                .map(|((l, e), r)| json!({"label": l, "expr": render_diffpoly(e.representative()), "invariant": r.passed}))
                .collect();
            let doc = json!({"algebra": alg.name(), "k": ctx.level().to_string(), "generators": gens});
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Latex => {
            for (l, e) in fam.labels().iter().zip(fam.elements()) {
                println!("{} &= {} \\\\", l, walg::text::render_latex_diffpoly(e.representative()));
            }
        }
        Format::Text => {
            for (l, e) in fam.labels().iter().zip(fam.elements()) {
                println!("{} = {}", l, render_diffpoly(e.representative()));
            }
            print!("{}", rep);
        }
    }
    Ok(rep.passed())
}

/// Prints the golden comparison; true when every row matches.
fn compare_golden(c: &Common, engine: &LambdaBracket, to_stderr: bool) -> Outcome {
    let Some(path) = &c.golden else {
        return Ok(true);
    };
    let body = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
    let doc = TableDoc::from_json(&body).map_err(usage)?;
    let rows = table::compare(engine, &doc).map_err(usage)?;
    let matched = rows.iter().filter(|r| r.is_match()).count();
    let mut out = vec![format!("== comparison with {} ==", path.display())];
    out.extend(rows.iter().map(|r| r.to_string()));
    out.push(format!("{}/{} rows MATCH", matched, rows.len()));
    for line in out {
        if to_stderr {
            eprintln!("{}", line);
        } else {
            println!("{}", line);
        }
    }
    Ok(matched == rows.len())
}

fn emit_table(
    c: &Common,
    doc: impl FnOnce() -> TableDoc,
    labels: &[String],
    label_space: &std::sync::Arc<walg::GeneratorSpace>,
    rows: &[TableEntry],
) {
    match c.format {
        Format::Json => println!("{}", doc().to_json()),
        Format::Latex => {
            println!("\\begin{{aligned}}");
            for l in table::render_latex_labeled(label_space, rows) {
                println!("{}", l);
            }
            println!("\\end{{aligned}}");
        }
        Format::Text => {
            for l in table::render_text_labeled(labels, rows) {
                println!("{}", l);
            }
        }
    }
}

fn w_bracket(c: &Common) -> Outcome {
    let alg = load(&c.algebra)?;
    let ctx = ReductionContext::new(&alg, &level(&c.k)?);
    let fam = w_family(&ctx)?;
    let rows = match fam.bracket_table(&ctx) {
        Ok(r) => r,
        Err(e) => return Err(Failure::Check(format!("closure in generators : FAIL ({})", e))),
    };
    let lb = fam.label_bracket(&rows).map_err(usage)?;
    emit_table(c, || TableDoc::from_engine(&ctx, &fam, &rows), fam.labels(), fam.label_space(), &rows);
    let json = c.format == Format::Json;
    let mut rep = CheckReport::new("table checks");
    rep.pass("closure in generators", "");
    rep.extend(lb.check_generators());
    if !json {
        print!("{}", rep);
    }
    let golden_ok = compare_golden(c, &lb, json)?;
    Ok(rep.passed() && golden_ok)
}

fn zhu(c: &Common) -> Outcome {
    let alg = load(&c.algebra)?;
    let k = level(&c.k)?;
    let ctx = ReductionContext::new(&alg, &k);
    if !alg.is_minimal() {
        return Err(usage(format!("{} has no minimal nilpotent; the finite formulas need one", alg.name())));
    }
    let fam = wred::minimal_generators(&ctx).map_err(usage)?;
    let fw = FiniteW::new(&ctx, &fam).map_err(usage)?;
    let mut reports = vec![zhufin::check_zhu_current(&alg, &k)];
    reports.push(zhufin::check_projection_of_generators(&ctx).map_err(usage)?);
    reports.push(zhufin::check_finite_invariance(&fw));
    reports.push(zhufin::check_finite_table(&fw).map_err(usage)?);
    reports.push(zhufin::check_poisson_axioms(&fw).map_err(usage)?);
    if c.format == Format::Json {
        let gens: Vec<_> = fw
            .labels()
            .iter()
            .zip(fw.generators())
            .map(|(l, p)| json!({"label": l, "expr": render_diffpoly(p.poly())}))
            .collect();
        let doc = json!({"algebra": alg.name(), "k": k.to_string(), "generators": gens, "checks": reports});
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for (l, p) in fw.labels().iter().zip(fw.generators()) {
            println!("p({}) = {}", l, p);
        }
        print_reports(c.format, &reports);
    }
    Ok(all_passed(&reports))
}

fn frac_context(c: &Common) -> Result<(LieSuperalgebra, FracContext), Failure> {
    let alg = load(&c.algebra)?;
    let ctx = FracContext::new(&alg, c.t, &level(&c.k)?).map_err(usage)?;
    Ok((alg, ctx))
}

fn frac_gens(c: &Common) -> Outcome {
    let (alg, ctx) = frac_context(c)?;
    let fam = fractional::frac_generators(&ctx).map_err(usage)?;
    let rep = fractional::check_generators(&ctx, &fam);
    match c.format {
        Format::Json => {
            let gens: Vec<_> = fam
                .labels()
                .iter()
                .zip(fam.elements())
                .map(|(l, e)| json!({"label": l, "expr": render_diffpoly(e.representative()), "certified": e.is_certified()}))
                .collect();
            let doc = json!({"algebra": alg.name(), "k": ctx.level().to_string(), "t": ctx.t(), "generators": gens});
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Latex => {
            for (l, e) in fam.labels().iter().zip(fam.elements()) {
                println!("{} &= {} \\\\", l, walg::text::render_latex_diffpoly(e.representative()));
            }
        }
        Format::Text => {
            for (l, e) in fam.labels().iter().zip(fam.elements()) {
                println!("{} = {}", l, render_diffpoly(e.representative()));
            }
            print!("{}", rep);
        }
    }
    Ok(rep.passed())
}

fn frac_bracket(c: &Common) -> Outcome {
    let (alg, ctx) = frac_context(c)?;
    let fam = fractional::frac_generators(&ctx).map_err(usage)?;
    let rows = match fam.bracket_table(&ctx) {
        Ok(r) => r,
        Err(e) => return Err(Failure::Check(format!("closure in generators : FAIL ({})", e))),
    };
    let lb = fam.label_bracket(&rows).map_err(usage)?;
    let doc = || {
        let gens = fam.elements().iter().map(|e| e.representative());
        TableDoc::from_labeled(alg.name(), ctx.level(), fam.labels(), gens, &rows)
    };
    emit_table(c, doc, fam.labels(), fam.label_space(), &rows);
    let json = c.format == Format::Json;
    let mut reports = vec![lb.check_generators()];
    reports.push(fractional::check_bracket_rows(&ctx).map_err(usage)?);
    reports.push(fractional::check_lemma_brackets(&ctx).map_err(usage)?);
    reports.push(fractional::check_lemma_fz(&ctx).map_err(usage)?);
    if json {
        for r in &reports {
            eprint!("{}", r);
        }
    } else {
        print_reports(c.format, &reports);
    }
    let golden_ok = compare_golden(c, &lb, json)?;
    Ok(all_passed(&reports) && golden_ok)
}

fn run_props(p: &PropsArgs) -> Outcome {
    let c = &p.common;
    let alg = load(&c.algebra)?;
    let k = level(&c.k)?;
    let (bs, _) = build_brst(&alg, &k);
    let mut reports = vec![props::check_bracket_axioms(&alg.current_bracket(&k), p.samples, c.seed)];
    reports.push(props::check_bracket_axioms(bs.bracket(), p.samples, c.seed.wrapping_add(1)));
    reports.push(props::check_diffpoly_laws(bs.space(), p.cases, c.seed.wrapping_add(2)));
    print_reports(c.format, &reports);
    Ok(all_passed(&reports))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::VerifyAlgebra(c) => verify_algebra(c),
        Command::BrstCheck(c) => brst_check(c),
        Command::WGens(c) => w_gens(c),
        Command::WBracket(c) => w_bracket(c),
        Command::Zhu(c) => zhu(c),
        Command::FracGens(c) => frac_gens(c),
        Command::FracBracket(c) => frac_bracket(c),
        Command::Props(p) => run_props(p),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {}", msg);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
