//! Acceptance run: one PASS/FAIL line per criterion with its wall time.
//! Failing criteria are reported, not hidden; the process exits normally so
//! that the rest of the workspace suite still runs.

#[path = "support/naive.rs"]
mod support;

use std::time::{Duration, Instant};

use walg::brst::build_brst;
use walg::fractional::{self, FracContext};
use walg::props;
use walg::report::CheckReport;
use walg::sample::{SampleShape, Sampler};
use walg::superalgebra::builtin;
use walg::table;
use walg::wred::{self, ReductionContext};
use walg::zhufin::{self, FiniteW};
use walg::{HalfInt, LambdaBracket, Scalar};

struct Verdict {
    passed: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { passed: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        self.passed &= ok;
        self.notes.push(format!("{} {}", if ok { "ok  " } else { "FAIL" }, note.into()));
    }

    fn report(&mut self, rep: &CheckReport) {
        for line in rep.summary_lines() {
            self.require(!line.contains(": FAIL"), format!("{}: {}", rep.title, line));
        }
        for e in rep.failures().take(3) {
            self.notes.push(format!("     at {}: {}", e.location, e.residual.clone().unwrap_or_default()));
        }
    }
}

fn ctx(name: &str, k: Scalar) -> ReductionContext {
    ReductionContext::new(&builtin(name).expect("builtin"), &k)
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new();
    let c = ctx("spo(2|1)", Scalar::one());
    let fam = wred::minimal_generators(&c).expect("minimal generators");
    let rows = fam.bracket_table(&c).expect("closed table");
    let lb = fam.label_bracket(&rows).expect("label bracket");
    for r in table::compare(&lb, &table::golden("spo(2|1)").expect("golden")).expect("comparable") {
        v.require(r.is_match(), r.to_string());
    }
    v
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let c = ctx("spo(2|3)", Scalar::one());
    let doc = table::golden("spo(2|3)").expect("golden");
    let fam = doc.family(&c).expect("printed generators parse");
    for (l, e) in fam.labels().iter().zip(fam.elements()) {
        v.require(c.is_w_element(e.representative()).holds, format!("{} is a W-element", l));
    }
    let t_gen = start.elapsed();
    v.require(t_gen < Duration::from_secs(5), format!("membership in {:.2?} (< 5 s)", t_gen));
    let rows = match fam.bracket_table(&c) {
        Ok(r) => r,
        Err(e) => {
            v.require(false, format!("table closes in generators: {}", e));
            return v;
        }
    };
    v.require(rows.len() == 10, format!("{} table entries, closed in generators", rows.len()));
    let lb = fam.label_bracket(&rows).expect("label bracket");
    v.report(&lb.check_generators());
    let cmp = table::compare(&lb, &doc).expect("comparable");
    let matched = cmp.iter().filter(|r| r.is_match()).count();
    for r in &cmp {
        v.notes.push(format!("     {}", r.to_string().replace('\n', "\n     ")));
    }
    v.require(matched >= 8, format!("{}/10 rows MATCH the printed table (need >= 8)", matched));
    v
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new();
    for name in ["sl(2)", "spo(2|1)", "spo(2|3)"] {
        let (sp, el) = build_brst(&builtin(name).expect("builtin"), &Scalar::k());
        v.report(&sp.check_all(&el));
    }
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new();
    for name in ["spo(2|1)", "sl(2)"] {
        let c = ctx(name, Scalar::k());
        let fam = wred::minimal_generators(&c).expect("minimal generators");
        for (l, e) in fam.labels().iter().zip(fam.elements()) {
            v.require(c.is_w_element(e.representative()).holds, format!("{} {} invariant at symbolic k", name, l));
        }
        v.report(&zhufin::check_projection_of_generators(&c).expect("projections"));
    }
    v
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new();
    for k in [Scalar::k(), Scalar::one()] {
        v.notes.push(format!("k = {}", k));
        let c = ctx("spo(2|1)", k);
        let fam = wred::minimal_generators(&c).expect("minimal generators");
        let fw = FiniteW::new(&c, &fam).expect("finite W");
        v.report(&zhufin::check_finite_table(&fw).expect("finite relations"));
        v.report(&zhufin::check_homomorphism(&fw, fam.elements()).expect("homomorphism"));
    }
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    let alg = builtin("spo(2|1)").expect("builtin");
    for t in [1, 2] {
        let c = FracContext::new(&alg, t, &Scalar::k()).expect("fractional context");
        let fam = fractional::frac_generators(&c).expect("generators");
        v.report(&fractional::check_generators(&c, &fam));
        v.report(&fractional::check_bracket_rows(&c).expect("rows"));
        v.report(&fractional::check_lemma_brackets(&c).expect("lemma brackets"));
        v.report(&fractional::check_lemma_fz(&c).expect("f z brackets"));
    }
    v
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new();
    let cur = builtin("spo(2|1)").expect("builtin").current_bracket(&Scalar::k());
    v.report(&props::check_bracket_axioms(&cur, 500, 701));
    let (bs, _) = build_brst(&builtin("spo(2|3)").expect("builtin"), &Scalar::k());
    v.report(&props::check_bracket_axioms(bs.bracket(), 500, 702));
    let laws = props::check_diffpoly_laws(bs.space(), 1200, 703);
    v.require(laws.len() >= 1000, format!("{} normal-form cases", laws.len()));
    v.report(&laws);
    v
}

fn oracle_pairs(v: &mut Verdict, br: &LambdaBracket, n: usize, seed: u64) {
    let mut s = Sampler::new(seed, SampleShape::default());
    let bad = s
        .pairs(br.space(), n)
        .into_iter()
        .filter(|(a, b)| br.br(a, b) != support::naive(br, a, b))
        .count();
    v.require(bad == 0, format!("{} pairs over {}: {} disagreements", n, br.space().label(), bad));
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new();
    oracle_pairs(&mut v, &builtin("spo(2|1)").expect("builtin").current_bracket(&Scalar::k()), 200, 801);
    let (bs, _) = build_brst(&builtin("spo(2|1)").expect("builtin"), &Scalar::k());
    oracle_pairs(&mut v, bs.bracket(), 100, 802);
    for name in ["spo(2|1)", "sl(2)"] {
        let c = ctx(name, Scalar::one());
        let closed = wred::minimal_generators(&c).expect("minimal generators");
        let found = wred::find_generators(&c, HalfInt::from_int(3)).expect("search");
        let norm = wred::triangular_normalize(&c, &closed, &found).expect("normalization");
        let same = norm.len() == closed.len()
            && norm
                .iter()
                .all(|(l, p)| closed.element(l).map(|e| e.representative() == p).unwrap_or(false));
        v.require(same, format!("{}: search agrees with closed forms on {} generators", name, norm.len()));
    }
    v
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Option<u64>); 8] = [
        ("1 spo(2|1) bracket table", criterion_1, Some(1)),
        ("2 spo(2|3) suite", criterion_2, Some(60)),
        ("3 BRST identities", criterion_3, Some(30)),
        ("4 minimal generators and projections", criterion_4, Some(5)),
        ("5 finite W relations", criterion_5, None),
        ("6 fractional generators and brackets", criterion_6, Some(120)),
        ("7 property suite", criterion_7, None),
        ("8 oracle equivalence", criterion_8, None),
    ];
    let mut passed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let mut v = run();
        let took = start.elapsed();
        if let Some(s) = budget {
            v.require(took < Duration::from_secs(s), format!("finished within {} s", s));
        }
        passed += v.passed as usize;
        println!("{} criterion {} ({:.2?})", if v.passed { "PASS" } else { "FAIL" }, name, took);
        for n in &v.notes {
            println!("    {}", n);
        }
    }
    println!("acceptance: {}/8 criteria PASS", passed);
}
