use walg::fractional::*;
use walg::superalgebra::{builtin, Elem, LieSuperalgebra};
use walg::{DiffPoly, LambdaPoly, Q, Scalar};

fn qq(n: i64, d: i64) -> Scalar {
    Scalar::from_q(Q::new(n.into(), d.into()))
}

/// Explicit closed forms, written term by term:
/// u:  u zᵖ - Σ z*_α z^t [z_α, u zᵖ]
/// v:  ... - x z^t [e, v zᵖ] + ½ ΣΣ z*_α z^t z*_β z^t [z_β,[z_α, v zᵖ]]
/// w:  ... + x z^t z*_β z^t [z_β,[e, w zᵖ]] - 1/6 ΣΣΣ (...) - kδ_{p0} Σ ∂(z*_α z^t)(z_α|w)
/// f:  w-form - (x z^t)² e zᵖ - ΣΣ x z^t z*_α z^t z*_β z^t [z_β,[z_α, x zᵖ]] + 1/24 (4-fold)
///     - kδ_{p0}(∂(x z^t) - ½ Σ ∂(z*_α z^t) z_α z^t)
fn closed_form(ctx: &FracContext, g: &Elem, p: u32) -> DiffPoly {
    let alg = ctx.algebra();
    let t = ctx.t();
    let md = alg.minimal_data().unwrap();
    let sl2 = alg.sl2().clone();
    let lp = |v: &Elem, r: u32| ctx.loop_poly(v, r, 0);
    let br = |a: &Elem, b: &Elem| alg.bracket(a, b);
    let zs: Vec<(Elem, Elem)> = md.z.iter().cloned().zip(md.z_star.iter().cloned()).collect();
    let xt = lp(&sl2.x, t);
    let mut out = lp(g, p);
    for (z, s) in &zs {
        out -= &(&lp(s, t) * &lp(&br(z, g), p));
    }
    out -= &(&xt * &lp(&br(&sl2.e, g), p));
    for (za, sa) in &zs {
        for (zb, sb) in &zs {
            let inner = br(zb, &br(za, g));
            out.add_scaled(&(&(&lp(sa, t) * &lp(sb, t)) * &lp(&inner, p)), &qq(1, 2));
        }
    }
    for (zb, sb) in &zs {
        let inner = br(zb, &br(&sl2.e, g));
        out += &(&(&xt * &lp(sb, t)) * &lp(&inner, p));
    }
    for (za, sa) in &zs {
        for (zb, sb) in &zs {
            for (zc, sc) in &zs {
                let inner = br(zc, &br(zb, &br(za, g)));
                let pre = &(&lp(sa, t) * &lp(sb, t)) * &lp(sc, t);
                out.add_scaled(&(&pre * &lp(&inner, p)), &qq(-1, 6));
            }
        }
    }
    let is_f = alg.grade_of(g) == Some(-walg::HalfInt::ONE);
    if is_f {
        out -= &(&(&xt * &xt) * &lp(&br(&sl2.e, &br(&sl2.e, g)), p).scale(&qq(-1, 2)));
        for (za, sa) in &zs {
            for (zb, sb) in &zs {
                let inner = br(zb, &br(za, &br(&sl2.e, g)));
                let pre = &(&xt * &lp(sa, t)) * &lp(sb, t);
                out -= &(&pre * &lp(&inner, p).scale(&qq(-1, 2)));
            }
        }
        for (za, sa) in &zs {
            for (zb, sb) in &zs {
                for (zc, sc) in &zs {
                    for (zd, sd) in &zs {
                        let inner = br(zd, &br(zc, &br(zb, &br(za, g))));
                        let pre = &(&(&lp(sa, t) * &lp(sb, t)) * &lp(sc, t)) * &lp(sd, t);
                        out.add_scaled(&(&pre * &lp(&inner, p)), &qq(1, 24));
                    }
                }
            }
        }
    }
    if p == 0 {
        let k = ctx.level();
        for (z, s) in &zs {
            let c = k * &Scalar::from_q(alg.form(z, g));
            out.add_scaled(&ctx.loop_poly(s, t, 1), &-c);
        }
        if is_f {
            let mut corr = ctx.loop_poly(&sl2.x, t, 1);
            for (z, s) in &zs {
                corr.add_scaled(&(&ctx.loop_poly(s, t, 1) * &lp(z, t)), &qq(-1, 2));
            }
            out.add_scaled(&corr, &-k.clone());
        }
    }
    ctx.reduce(&out)
}

fn spo21(t: u32) -> (LieSuperalgebra, FracContext) {
    let alg = builtin("spo(2|1)").unwrap();
    let ctx = FracContext::new(&alg, t, &Scalar::k()).unwrap();
    (alg, ctx)
}

#[test]
fn ideal_and_bracket_examples() {
    let (alg, ctx) = spo21(1);
    let e = alg.sl2().e.clone();
    let minus_one = DiffPoly::constant(ctx.space(), Scalar::from_int(-1));
    assert_eq!(ctx.reduce(&ctx.loop_poly(&e, 1, 0)), minus_one);
    assert_eq!(ctx.reduce(&ctx.loop_poly(&alg.sl2().f, 2, 0)), minus_one);
    assert!(ctx.reduce(&ctx.loop_poly(&e, 1, 1)).is_zero());
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            let (x, y) = (alg.basis(a), alg.basis(b));
            let mixed = ctx.bracket().br(&ctx.loop_poly(&x, 1, 0), &ctx.loop_poly(&y, 0, 0));
            assert!(mixed.is_zero());
            let both = ctx.bracket().br(&ctx.loop_poly(&x, 1, 0), &ctx.loop_poly(&y, 1, 0));
            let want = ctx.loop_poly(&alg.bracket(&x, &y), 2, 0).scale(&Scalar::from_int(-1));
            assert_eq!(both, LambdaPoly::constant(want));
        }
    }
}

#[test]
fn ad_action_examples() {
    for t in [1, 2] {
        let (alg, ctx) = spo21(t);
        let md = alg.minimal_data().unwrap();
        for (d, zd) in md.z.iter().enumerate() {
            for (a, za) in md.z_star.iter().enumerate() {
                let r = ctx.ad_lambda(zd, &ctx.loop_poly(za, t, 0));
                let want = if a == d { 1 } else { 0 };
                assert_eq!(r.at_zero(), DiffPoly::constant(ctx.space(), Scalar::from_int(want)));
                assert_eq!(r.degree().unwrap_or(0), 0);
            }
        }
        assert!(ctx.ad_lambda(&alg.sl2().e, &DiffPoly::one(ctx.space())).is_zero());
    }
}

#[test]
fn generators_are_invariant_and_counted() {
    for t in [1, 2] {
        let (alg, ctx) = spo21(t);
        let fam = frac_generators(&ctx).unwrap();
        assert_eq!(fam.len(), t as usize * alg.dim() + alg.g_f().len());
        let rep = check_generators(&ctx, &fam);
        assert!(rep.passed(), "{:?}", rep.summary_lines());
        for p in 0..t {
            let e = eta(&ctx, &alg.sl2().e, p).unwrap();
            assert_eq!(e, ctx.loop_poly(&alg.sl2().e, p, 0));
        }
    }
}

#[test]
fn universal_sum_matches_closed_forms() {
    for t in [1, 2] {
        let (alg, ctx) = spo21(t);
        for p in 0..=t {
            for b in 0..alg.dim() {
                let g = alg.basis(b);
                if !ctx.in_generator_space(&g, p) {
                    continue;
                }
                assert_eq!(eta(&ctx, &g, p).unwrap(), closed_form(&ctx, &g, p), "{} z^{}", alg.basis_name(b), p);
            }
        }
    }
}

#[test]
fn level_corrections_only_at_power_zero() {
    for t in [1, 2] {
        let (alg, ctx) = spo21(t);
        let f = alg.sl2().f.clone();
        for p in 0..=t {
            let every = eta_with(&ctx, &f, p, Correction::EveryPower).unwrap();
            assert_eq!(ctx.is_w_element(&every).holds, p == 0, "f z^{}", p);
        }
        // without any correction f and w fail at p = 0
        let raw = ctx.reduce(&eta_prime(&ctx, &f, 0).unwrap());
        assert!(!ctx.is_w_element(&raw).holds);
    }
}

#[test]
fn bracket_rows_at_t1() {
    let (_, ctx) = spo21(1);
    let rep = check_bracket_rows(&ctx).unwrap();
    assert!(rep.passed(), "{:?}", rep.summary_lines());
}

#[test]
fn bracket_rows_at_t2_fail_only_on_fz_with_itself() {
    let (alg, ctx) = spo21(2);
    let rep = check_bracket_rows(&ctx).unwrap();
    let fails: Vec<_> = rep.failures().map(|e| (e.name.clone(), e.location.clone())).collect();
    assert_eq!(fails, vec![("row 4".to_string(), "{f z λ (f_ev) z^1}".to_string())]);
    // skew-symmetry forces {a λ a} of an even a to vanish at λ^0 up to ∂:
    // the engine value is zero, the stated value -η(2x z) is not
    let fz = ctx.check(&eta(&ctx, &alg.sl2().f, 1).unwrap());
    assert!(ctx.w_bracket(&fz, &fz).unwrap().is_zero());
    let stated = eta(&ctx, &alg.sl2().x.scale(&Q::from_integer(2.into())), 1).unwrap();
    assert!(!stated.is_zero());
}

#[test]
fn finite_shadow_lemmas() {
    for t in [1, 2] {
        let (_, ctx) = spo21(t);
        let rep = check_lemma_brackets(&ctx).unwrap();
        assert!(rep.passed(), "{:?}", rep.summary_lines());
        let fz = check_lemma_fz(&ctx).unwrap();
        let fails: Vec<_> = fz.failures().map(|e| e.location.clone()).collect();
        if t == 1 {
            assert!(fails.is_empty(), "{:?}", fails);
        } else {
            assert_eq!(fails, vec!["{f z, (f_ev) z^1}".to_string()]);
        }
    }
}

#[test]
fn table_closes_in_generators() {
    for t in [1, 2] {
        let (_, ctx) = spo21(t);
        let fam = frac_generators(&ctx).unwrap();
        let table = fam.bracket_table(&ctx).unwrap();
        assert_eq!(table.len(), fam.len() * (fam.len() + 1) / 2);
        for e in &table {
            let back = e.value.map_into(ctx.space(), |c| fam.evaluate(&ctx, c));
            let direct = ctx.w_bracket(&fam.elements()[e.left], &fam.elements()[e.right]).unwrap();
            assert_eq!(ctx.reduce_lambda(&back), direct);
        }
        let lb = fam.label_bracket(&table).unwrap();
        let rep = lb.check_generators();
        assert!(rep.passed(), "{:?}", rep.summary_lines());
    }
}

#[test]
fn t0_degenerates_to_ordinary_reduction() {
    let alg = builtin("spo(2|1)").unwrap();
    for k in [Scalar::k(), Scalar::from_int(1)] {
        let rep = check_degeneration(&alg, &k, 50, 11).unwrap();
        assert!(rep.passed(), "{:?}", rep.summary_lines());
    }
}

#[test]
fn sl2_generators() {
    let alg = builtin("sl2").unwrap();
    let ctx = FracContext::new(&alg, 1, &Scalar::k()).unwrap();
    let fam = frac_generators(&ctx).unwrap();
    assert_eq!(fam.len(), 4);
    assert!(check_generators(&ctx, &fam).passed());
    assert!(check_lemma_brackets(&ctx).unwrap().passed());
}

#[test]
fn deeper_gradings_are_rejected() {
    let alg = builtin("spo(2|3)").unwrap();
    assert!(matches!(FracContext::new(&alg, 1, &Scalar::k()), Err(FracError::Depth(_))));
    let (_, ctx0) = spo21(0);
    assert!(matches!(frac_generators(&ctx0), Err(FracError::ZeroT)));
}
