//! The library's bracket against an independently coded expander.

#[path = "support/naive.rs"]
mod support;

use support::naive;
use walg::brst;
use walg::diffpoly::DiffPoly;
use walg::sample::{SampleShape, Sampler};
use walg::scalar::{q, Scalar};
use walg::superalgebra::builtin;
use walg::{LambdaBracket, LambdaPoly};

fn agree_on(br: &LambdaBracket, n: usize, seed: u64) {
    let mut s = Sampler::new(seed, SampleShape::default());
    for (a, b) in s.pairs(br.space(), n) {
        assert_eq!(br.br(&a, &b), naive(br, &a, &b), "{{{} λ {}}}", a, b);
    }
}

#[test]
fn agrees_on_current_algebra_pairs() {
    let alg = builtin("spo(2|1)").unwrap();
    agree_on(&alg.current_bracket(&Scalar::k()), 150, 5);
    let sl2 = builtin("sl(2)").unwrap();
    agree_on(&sl2.current_bracket(&Scalar::from_int(3)), 50, 6);
}

#[test]
fn agrees_on_brst_pairs() {
    let alg = builtin("spo(2|1)").unwrap();
    let (bs, _) = brst::build_brst(&alg, &Scalar::k());
    agree_on(bs.bracket(), 100, 7);
}

#[test]
fn product_on_the_left_matches_naive_expansion() {
    // {ab λ c} in the opposite recursion order, 200 random triples
    let alg = builtin("spo(2|1)").unwrap();
    let br = alg.current_bracket(&Scalar::k());
    let mut s = Sampler::new(8, SampleShape { max_degree: 2, max_order: 2, max_terms: 2 });
    for (a, b, c) in s.triples(br.space(), 200) {
        let ab = &a * &b;
        assert_eq!(br.br(&ab, &c), naive(&br, &ab, &c));
    }
}

#[test]
fn current_algebra_examples() {
    let alg = builtin("spo(2|1)").unwrap();
    let br = alg.current_bracket(&Scalar::k());
    let sp = br.space();
    let h = DiffPoly::named(sp, "h").unwrap();
    let want = LambdaPoly::from_coeff(1, DiffPoly::constant(sp, Scalar::k().scale(&q(2, 1))));
    assert_eq!(br.br(&h, &h), want);
    let one = DiffPoly::one(sp);
    assert!(br.br(&h, &one).is_zero());
    assert!(br.br(&one, &h).is_zero());
}

#[test]
fn axioms_hold_on_basis_and_random_triples() {
    let alg = builtin("spo(2|1)").unwrap();
    let br = alg.current_bracket(&Scalar::k());
    let rep = br.check_generators();
    assert!(rep.passed(), "{:?}", rep.summary_lines());
    let rep = walg::props::check_bracket_axioms(&br, 40, 21);
    assert!(rep.passed(), "{:?}", rep.summary_lines());
    let alg = builtin("spo(2|3)").unwrap();
    let (bs, _) = brst::build_brst(&alg, &Scalar::k());
    let rep = walg::props::check_bracket_axioms(bs.bracket(), 60, 22);
    assert!(rep.passed(), "{:?}", rep.summary_lines());
}

#[test]
fn corrupted_table_is_located() {
    let alg = builtin("spo(2|1)").unwrap();
    let mut br = alg.current_bracket(&Scalar::k());
    let sp = br.space().clone();
    let (e, f) = (sp.lookup("e_ev").unwrap(), sp.lookup("f_ev").unwrap());
    // one orientation only, so skewsymmetry breaks on (e_ev, f_ev)
    let mut bad = br.entry(e, f).clone();
    bad += &LambdaPoly::constant(DiffPoly::var(&sp, e));
    br.set_entry(e, f, bad);
    let (x, y) = (DiffPoly::var(&sp, e), DiffPoly::var(&sp, f));
    let rep = br.check_skewsymmetry(&[(x.clone(), y.clone()), (x.clone(), x.clone())]);
    let fails: Vec<_> = rep.failures().collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].location.contains("e_ev") && fails[0].location.contains("f_ev"));
    let h = DiffPoly::named(&sp, "h").unwrap();
    assert!(!br.check_jacobi(&[(h, x, y)]).passed());
}
