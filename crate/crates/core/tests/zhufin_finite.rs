use walg::scalar::Scalar;
use walg::superalgebra::builtin;
use walg::text;
use walg::wred::*;
use walg::zhufin::*;

fn ctx(name: &str, k: Scalar) -> ReductionContext {
    ReductionContext::new(&builtin(name).unwrap(), &k)
}

#[test]
fn projected_generators_of_spo21() {
    let c = ctx("spo(2|1)", Scalar::one());
    let fam = minimal_generators(&c).unwrap();
    let fw = FiniteW::new(&c, &fam).unwrap();
    let want = text::parse_diffpoly(c.space(), "f_ev + 1/2 f_od*e_od - 1/4 h^2").unwrap();
    assert_eq!(fw.generators()[1].poly(), &want);
    assert!(check_finite_invariance(&fw).passed());
}

#[test]
fn finite_relations_hold() {
    for (name, k) in [("spo(2|1)", Scalar::one()), ("spo(2|1)", Scalar::k()), ("sl(2)", Scalar::k())] {
        let c = ctx(name, k);
        let fam = minimal_generators(&c).unwrap();
        let fw = FiniteW::new(&c, &fam).unwrap();
        let rep = check_finite_table(&fw).unwrap();
        assert!(rep.passed(), "{}", rep);
        assert!(check_poisson_axioms(&fw).unwrap().passed());
        assert!(check_homomorphism(&fw, fam.elements()).unwrap().passed());
    }
}

#[test]
fn projection_of_v_and_w_generators_matches() {
    let c = ctx("spo(2|1)", Scalar::k());
    let rep = check_projection_of_generators(&c).unwrap();
    let failed: Vec<_> = rep.failures().map(|f| f.name.clone()).collect();
    assert_eq!(failed, vec!["p(phi_f) = psi_f".to_string()]);
}

#[test]
fn displayed_psi_f_is_twice_the_projection_for_sl2() {
    let c = ctx("sl(2)", Scalar::k());
    let pf = zhu_project(&phi_f(&c).unwrap());
    assert_eq!(psi_f(&c).unwrap().poly(), &pf.poly().scale(&Scalar::from_int(2)));
}

#[test]
fn displayed_psi_f_is_not_invariant_for_spo21() {
    let c = ctx("spo(2|1)", Scalar::one());
    let m = is_finite_w_element(&c, &psi_f(&c).unwrap());
    assert!(!m.holds);
}

#[test]
fn products_lift_and_bracket() {
    let c = ctx("spo(2|1)", Scalar::one());
    let fam = minimal_generators(&c).unwrap();
    let fw = FiniteW::new(&c, &fam).unwrap();
    let g = fw.generators();
    let prod = FinitePoly::new(g[0].poly() * g[1].poly()).unwrap();
    let expr = fw.express(&prod).unwrap();
    assert_eq!(expr.to_string(), "phi_od*phi_ev");
    let one = FinitePoly::new(walg::diffpoly::DiffPoly::one(c.space())).unwrap();
    assert!(fw.bracket(&prod, &one).unwrap().is_zero());
    let raw = FinitePoly::new(walg::diffpoly::DiffPoly::named(c.space(), "h").unwrap()).unwrap();
    assert!(matches!(fw.lift(&raw), Err(ZhuError::NoLift(_))));
}
