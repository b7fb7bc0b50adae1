use std::path::PathBuf;
use std::process::{Command, Output};

use walg::superalgebra::{builtin, AlgebraDoc, RatDoc};
use walg::table::TableDoc;
use walg::wred::{minimal_generators, ReductionContext};
use walg::Scalar;

fn walg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden_path(file: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "golden", file].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn spo21_table_at_level_one() {
    let o = walg(&["w-bracket", "--algebra", "builtin:spo(2|1)", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("{phi_od λ phi_od} = -2·phi_ev - 2·λ^2"), "{}", out);
    assert!(out.contains("{phi_ev λ phi_ev} = -∂(phi_ev) - 2·λ·phi_ev - (1/2)·λ^3"));
    assert!(out.contains("jacobi : PASS"));
}

#[test]
fn brst_check_for_sl2() {
    let o = walg(&["brst-check", "--algebra", "builtin:sl(2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "{d λ d} = 0 : PASS"));
}

#[test]
fn verify_algebra_builtin_and_corrupted_file() {
    assert_eq!(walg(&["verify-algebra", "--algebra", "builtin:spo(2|3)"]).status.code(), Some(0));
    let mut doc: AlgebraDoc = builtin("spo(2|1)").unwrap().to_doc();
    let b = doc
        .brackets
        .iter_mut()
        .find(|b| (b.left == "h" || b.right == "h") && b.terms.iter().any(|t| t.gen.ends_with("_od")))
        .unwrap();
    b.terms[0].coeff = RatDoc::from_q(&walg::scalar::qi(3));
    let path = std::env::temp_dir().join(format!("walg-bad-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = walg(&["verify-algebra", "--algebra", &format!("file:{}", path.display())]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("axiom violated"), "{}", stderr(&o));
}

#[test]
fn json_table_round_trips_byte_identically() {
    for (name, k) in [("spo(2|1)", "1"), ("spo(2|1)", "symbolic"), ("sl(2)", "2")] {
        let o = walg(&["w-bracket", "--algebra", &format!("builtin:{}", name), "--k", k, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let doc = TableDoc::from_json(&out).unwrap();
        let level = if k == "symbolic" { Scalar::k() } else { Scalar::from_int(k.parse().unwrap()) };
        let ctx = ReductionContext::new(&builtin(name).unwrap(), &level);
        let fam = minimal_generators(&ctx).unwrap();
        let again = doc.canonicalize(fam.label_space()).unwrap().to_json();
        assert_eq!(format!("{}\n", again), out);
    }
}

#[test]
fn golden_comparison_marks_rows() {
    let o = walg(&["w-bracket", "--algebra", "builtin:spo(2|1)", "--k", "1", "--golden", &golden_path("spo21.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3/3 rows MATCH"));
    let o = walg(&["w-bracket", "--algebra", "builtin:spo(2|3)", "--k", "1", "--golden", &golden_path("spo23.json")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.matches(": MATCH").count(), 5);
    assert_eq!(out.matches(": ENGINE-DIFFERS").count(), 5);
    assert!(out.contains("  golden: "));
    assert!(out.contains("closure in generators : PASS"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(walg(&["w-gens", "--algebra", "nope"]).status.code(), Some(2));
    assert_eq!(walg(&["w-gens", "--algebra", "builtin:e8"]).status.code(), Some(2));
    assert_eq!(walg(&["w-gens", "--algebra", "builtin:sl(2)", "--k", "x/0"]).status.code(), Some(2));
    assert_eq!(walg(&["w-gens"]).status.code(), Some(2));
    assert_eq!(walg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(walg(&["frac-gens", "--algebra", "builtin:spo(2|3)"]).status.code(), Some(2));
    assert_eq!(walg(&["w-bracket", "--algebra", "builtin:sl(2)", "--format", "pdf"]).status.code(), Some(2));
}

#[test]
fn generators_with_invariance_status() {
    let o = walg(&["w-gens", "--algebra", "builtin:spo(2|1)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("phi_od = "));
    assert!(out.contains("invariance : PASS (2 checks)"));
    let o = walg(&["w-gens", "--algebra", "builtin:spo(2|3)", "--k", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 4);
    assert!(gens.iter().all(|g| g["invariant"] == true));
}

#[test]
fn latex_table() {
    let o = walg(&["w-bracket", "--algebra", "builtin:sl(2)", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("\\begin{aligned}"));
    assert!(out.contains("\\lambda"));
}

#[test]
fn fractional_commands() {
    let o = walg(&["frac-gens", "--algebra", "builtin:spo(2|1)", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ad n invariance : PASS (7 checks)"));
    let o = walg(&["frac-bracket", "--algebra", "builtin:spo(2|1)", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // at t = 2 the single pair {f z, f z} disagrees with the stated row
    let o = walg(&["frac-bracket", "--algebra", "builtin:spo(2|1)", "--t", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("row 4 : FAIL (1 of 7 checks)"));
    assert!(out.contains("row 5 : PASS"));
}

#[test]
fn zhu_reports_each_relation() {
    let o = walg(&["zhu", "--algebra", "builtin:sl(2)", "--k", "1"]);
    let out = stdout(&o);
    assert!(out.contains("p(phi_f) = -(1/4)·h*h + f"), "{}", out);
    assert!(out.contains("{psi_f, W} : PASS"));
    assert!(out.contains("jacobi : PASS"));
    let o = walg(&["zhu", "--algebra", "builtin:spo(2|1)"]);
    let out = stdout(&o);
    assert!(out.contains("p(phi_w) = psi_w : PASS"));
    assert!(out.contains("{psi_w1, psi_w2} : PASS"));
    // the projection of φ_f differs from the displayed ψ_f
    assert!(out.contains("p(phi_f) = psi_f : FAIL"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn props_are_deterministic_for_a_seed() {
    let args = [
        "props", "--algebra", "builtin:spo(2|1)", "--samples", "8", "--cases", "60", "--seed", "4",
    ];
    let a = walg(&args);
    let b = walg(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("jacobi : PASS (8 checks)"));
}
