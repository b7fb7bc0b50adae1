use walg::brst::build_brst;
use walg::diffpoly::{DiffPoly, GeneratorSpace, Parity};
use walg::props;
use walg::superalgebra::{builtin, load_algebra, AlgebraError, AlgebraDoc, RatDoc};
use walg::text::{parse_diffpoly, render_diffpoly};
use walg::Scalar;

#[test]
fn builtins_satisfy_axioms_and_round_trip() {
    for name in ["sl(2)", "spo(2|1)", "spo(2|3)"] {
        let alg = builtin(name).unwrap();
        let rep = alg.check_axioms();
        assert!(rep.passed(), "{}: {:?}", name, rep.summary_lines());
        let back = load_algebra(&alg.to_json()).unwrap();
        assert_eq!(back.to_doc(), alg.to_doc());
        assert_eq!(back.to_json(), alg.to_json());
    }
    assert!(matches!(builtin("g2"), Err(AlgebraError::UnknownBuiltin(_))));
}

#[test]
fn corrupted_structure_constant_is_rejected() {
    let alg = builtin("spo(2|1)").unwrap();
    let mut doc: AlgebraDoc = alg.to_doc();
    let entry = doc
        .brackets
        .iter_mut()
        .find(|b| (b.left == "h" || b.right == "h") && b.terms.iter().any(|t| t.gen.ends_with("_od")))
        .expect("an odd bracket with h is listed");
    entry.terms[0].coeff = RatDoc::from_q(&walg::scalar::qi(3));
    let err = doc.into_algebra().unwrap_err();
    assert!(matches!(err, AlgebraError::AxiomViolation { .. }), "{}", err);
}

#[test]
fn normal_form_laws_on_a_thousand_cases() {
    let alg = builtin("spo(2|1)").unwrap();
    let (bs, _) = build_brst(&alg, &Scalar::k());
    let rep = props::check_diffpoly_laws(bs.space(), 1200, 17);
    assert_eq!(rep.len(), 1200);
    assert!(rep.passed(), "{:?}", rep.summary_lines());
    let even = builtin("sl(2)").unwrap();
    let rep = props::check_diffpoly_laws(even.space(), 300, 18);
    assert!(rep.passed(), "{:?}", rep.summary_lines());
}

#[test]
fn koszul_signs_and_canonical_order() {
    let sp = GeneratorSpace::new("s", vec![("a", Parity::Odd), ("b", Parity::Odd), ("c", Parity::Even)]).unwrap();
    let a = DiffPoly::named(&sp, "a").unwrap();
    let b = DiffPoly::named(&sp, "b").unwrap();
    let c = DiffPoly::named(&sp, "c").unwrap();
    assert_eq!(&a * &b, -(&b * &a));
    assert_eq!(&a * &c, &c * &a);
    assert!((&a * &a).is_zero());
    assert!(!(&a * &a.partial()).is_zero());
    let p = parse_diffpoly(&sp, "b*a + 2*∂(c)*c").unwrap();
    assert_eq!(render_diffpoly(&p), render_diffpoly(&parse_diffpoly(&sp, "2*c*∂(c) - a*b").unwrap()));
    assert_eq!((&c * &c).partial(), (&c * &c.partial()).scale(&Scalar::from_int(2)));
}

#[test]
fn brst_identities_for_builtins() {
    for name in ["sl(2)", "spo(2|1)", "spo(2|3)"] {
        let (sp, el) = build_brst(&builtin(name).unwrap(), &Scalar::k());
        assert!(sp.bracket().br(&el.d, &el.d).is_zero(), "{}", name);
        let rep = sp.check_all(&el);
        assert!(rep.passed(), "{}: {:?}", name, rep.summary_lines());
    }
    let (sp, el) = build_brst(&builtin("spo(2|1)").unwrap(), &Scalar::k());
    assert!(!sp.check_d_squared(&el.d_without(2)).passed());
}
