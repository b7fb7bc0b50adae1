//! Classical finite W-superalgebras obtained from affine ones by the
//! projection `∂ⁿa ↦ δ_{n0} a`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::diffpoly::DiffPoly;
use crate::lambda::LambdaPoly;
use crate::report::CheckReport;
use crate::scalar::{q, Scalar, Q};
use crate::superalgebra::{Elem, LieSuperalgebra};
use crate::weight::HalfInt;
use crate::wred::{self, GeneratorFamily, Membership, ReductionContext, WElement, WError, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZhuError {
    #[error("{0} contains derivatives")]
    NotFinite(String),
    #[error("{0} has no lift to the affine W-algebra")]
    NoLift(String),
    #[error(transparent)]
    W(#[from] WError),
}

/// A polynomial in `S(g_{<1})`: a differential polynomial with no ∂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoly(DiffPoly);

impl FinitePoly {
    pub fn new(p: DiffPoly) -> Result<Self, ZhuError> {
        if p.max_order() > 0 {
            return Err(ZhuError::NotFinite(p.to_string()));
        }
        Ok(FinitePoly(p))
    }

    pub fn poly(&self) -> &DiffPoly {
        &self.0
    }

    pub fn into_poly(self) -> DiffPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for FinitePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Drops every monomial containing a derivative.
pub fn zhu_project(a: &DiffPoly) -> FinitePoly {
    FinitePoly(a.filter_terms(|m, _| m.max_order() == 0))
}

/// Image in `S(g,f) = S(g)/I^fin`, i.e. `m ↦ -(f|m)` on `g_{≥1}`.
pub fn finite_reduce(ctx: &ReductionContext, a: &DiffPoly) -> FinitePoly {
    zhu_project(&ctx.reduce(a))
}

/// `ad n` on `S(g,f)`: the Poisson bracket `{n, a} = [n, a]` extended as a derivation.
pub fn finite_ad(ctx: &ReductionContext, n: &Elem, a: &FinitePoly) -> FinitePoly {
    let b = ctx.bracket().br(&ctx.poly(n), a.poly()).coeff(0);
    finite_reduce(ctx, &b)
}

/// `ad n`-invariance for every basis element of `n`.
pub fn is_finite_w_element(ctx: &ReductionContext, a: &FinitePoly) -> Membership {
    let alg = ctx.algebra();
    for &n in ctx.nilpotent() {
        let r = finite_ad(ctx, &alg.basis(n), a);
        if !r.is_zero() {
            return Membership {
                holds: false,
                witness: Some(Witness {
                    n: alg.basis_name(n).to_string(),
                    degree: 0,
                    residual: r.to_string(),
                }),
            };
        }
    }
    Membership {
        holds: true,
        witness: None,
    }
}

/// `ψ_v = v - ½ Σ z*_α [z_α, v]`.
pub fn psi_v(ctx: &ReductionContext, v: &Elem) -> Result<FinitePoly, ZhuError> {
    let alg = ctx.algebra();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let mut p = ctx.poly(v);
    for (z, zs) in md.z.iter().zip(&md.z_star) {
        p.add_scaled(&(&ctx.poly(zs) * &ctx.poly(&alg.bracket(z, v))), &Scalar::from_q(q(-1, 2)));
    }
    Ok(finite_reduce(ctx, &p))
}

/// `ψ_w = w - Σ z*_α[z_α,w] + ⅓ ΣΣ z*_α z*_β [z_β,[z_α,w]]`.
pub fn psi_w(ctx: &ReductionContext, w: &Elem) -> Result<FinitePoly, ZhuError> {
    let alg = ctx.algebra();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let mut p = ctx.poly(w);
    for (z, zs) in md.z.iter().zip(&md.z_star) {
        p -= &(&ctx.poly(zs) * &ctx.poly(&alg.bracket(z, w)));
    }
    let third = Scalar::from_q(q(1, 3));
    for (za, zsa) in md.z.iter().zip(&md.z_star) {
        for (zb, zsb) in md.z.iter().zip(&md.z_star) {
            let inner = alg.bracket(zb, &alg.bracket(za, w));
            p.add_scaled(&(&(&ctx.poly(zsa) * &ctx.poly(zsb)) * &ctx.poly(&inner)), &third);
        }
    }
    Ok(finite_reduce(ctx, &p))
}

/// `ψ_f` = image of `-Σ u_α u^α` in `S(g,f)`, with the dual basis of [`LieSuperalgebra::dual_bases`].
pub fn psi_f(ctx: &ReductionContext) -> Result<FinitePoly, ZhuError> {
    let alg = ctx.algebra();
    let dual = alg.dual_bases().map_err(|e| WError::NotMinimal(e.to_string()))?;
    let mut p = DiffPoly::zero(ctx.space());
    for a in 0..alg.dim() {
        p -= &(&ctx.poly(&alg.basis(a)) * &ctx.poly(&dual.upper[a]));
    }
    Ok(finite_reduce(ctx, &p))
}

/// The finite W-algebra generated by the projections `ψ_i` of an affine family.
pub struct FiniteW<'a> {
    ctx: &'a ReductionContext,
    family: &'a GeneratorFamily,
    psi: Vec<FinitePoly>,
}

impl<'a> FiniteW<'a> {
    pub fn new(ctx: &'a ReductionContext, family: &'a GeneratorFamily) -> Result<Self, ZhuError> {
        if !family.all_certified() {
            return Err(WError::Uncertified("generator family".into()).into());
        }
        let psi = family.elements().iter().map(|e| zhu_project(e.representative())).collect();
        Ok(FiniteW { ctx, family, psi })
    }

    pub fn context(&self) -> &ReductionContext {
        self.ctx
    }

    pub fn family(&self) -> &GeneratorFamily {
        self.family
    }

    pub fn labels(&self) -> &[String] {
        self.family.labels()
    }

    pub fn generators(&self) -> &[FinitePoly] {
        &self.psi
    }

    /// `a` as a polynomial in the labels; the round trip is checked.
    pub fn express(&self, a: &FinitePoly) -> Result<DiffPoly, ZhuError> {
        let expr = self
            .family
            .express_finite_unchecked(self.ctx, a.poly())
            .map_err(|_| ZhuError::NoLift(a.to_string()))?;
        let back = expr.map_symbols(self.ctx.space(), |s| self.psi[s.gen()].poly().clone());
        if back != finite_reduce(self.ctx, a.poly()).into_poly() {
            return Err(ZhuError::NoLift(a.to_string()));
        }
        Ok(expr)
    }

    /// The affine W-element obtained by substituting `φ_i` for `ψ_i`.
    pub fn lift(&self, a: &FinitePoly) -> Result<WElement, ZhuError> {
        let expr = self.express(a)?;
        Ok(self.ctx.certify(&self.family.evaluate(&expr))?)
    }

    /// `{p(w1), p(w2)} = p({w1 λ w2}|_{λ=0})`.
    pub fn bracket(&self, a: &FinitePoly, b: &FinitePoly) -> Result<FinitePoly, ZhuError> {
        let la = self.lift(a)?;
        let lb = self.lift(b)?;
        let r: LambdaPoly = self.ctx.w_bracket(&la, &lb)?;
        Ok(zhu_project(&r.coeff(0)))
    }

    fn by_leading(&self, v: &Elem) -> Option<&FinitePoly> {
        self.family.leading().iter().position(|l| l == v).map(|i| &self.psi[i])
    }
}

/// The displayed relations between the `ψ`'s, evaluated with the finite bracket.
/// `ψ_f` in the relations is the projection of the family's `φ_f`.
pub fn check_finite_table(fw: &FiniteW) -> Result<CheckReport, ZhuError> {
    let ctx = fw.context();
    let alg = ctx.algebra();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let (a, b) = fw.family().dual_pair.clone();
    let ws: Vec<Elem> = alg.grading_component(-HalfInt::HALF).into_iter().map(|i| alg.basis(i)).collect();
    let pf = fw
        .by_leading(&alg.sl2().f)
        .cloned()
        .ok_or_else(|| ZhuError::NoLift("psi_f".into()))?;
    let mut rep = CheckReport::new(format!("finite generator relations for {}", alg.name()));
    let nm = |v: &Elem| alg.render(v);
    let mut cmp = |name: &str, loc: String, got: FinitePoly, want: FinitePoly| {
        let d = got.poly() - want.poly();
        rep.record(name, loc, (!d.is_zero()).then(|| format!("engine {} ; formula {}", got, want)));
    };
    for v1 in &a {
        for v2 in &a {
            let got = fw.bracket(&psi_v(ctx, v1)?, &psi_v(ctx, v2)?)?;
            cmp("{psi_v1, psi_v2}", format!("({}, {})", nm(v1), nm(v2)), got, psi_v(ctx, &alg.bracket(v1, v2))?);
        }
    }
    for v in &a {
        for w in &ws {
            let got = fw.bracket(&psi_v(ctx, v)?, &psi_w(ctx, w)?)?;
            cmp("{psi_v, psi_w}", format!("({}, {})", nm(v), nm(w)), got, psi_w(ctx, &alg.bracket(v, w))?);
        }
    }
    let zero = FinitePoly(DiffPoly::zero(ctx.space()));
    for (l, g) in fw.labels().iter().zip(fw.generators()) {
        let got = fw.bracket(&pf, g)?;
        cmp("{psi_f, W}", l.clone(), got, zero.clone());
    }
    let half_k = (ctx.level() * &Scalar::from_int(2))
        .inv()
        .map_err(|_| WError::Level("a nonzero monomial in k".into()))?;
    for w1 in &ws {
        for w2 in &ws {
            let got = fw.bracket(&psi_w(ctx, w1)?, &psi_w(ctx, w2)?)?;
            let mut c = pf.poly().clone();
            for (ai, bi) in a.iter().zip(&b) {
                c.add_scaled(&(psi_v(ctx, ai)?.poly() * psi_v(ctx, bi)?.poly()), &half_k);
            }
            let mut want = c.scale_q(&alg.form(&alg.sl2().e, &alg.bracket(w1, w2)));
            let p1 = alg.parity_of_elem(w1).unwrap_or_default();
            let p2 = alg.parity_of_elem(w2).unwrap_or_default();
            let sign = Scalar::from_int(p1.koszul(p2));
            for (z, zs) in md.z.iter().zip(&md.z_star) {
                let l = alg.sharp(&alg.bracket(w2, zs));
                let r = alg.sharp(&alg.bracket(z, w1));
                want.add_scaled(&(psi_v(ctx, &l)?.poly() * psi_v(ctx, &r)?.poly()), &sign);
            }
            cmp("{psi_w1, psi_w2}", format!("({}, {})", nm(w1), nm(w2)), got, FinitePoly(want));
        }
    }
    Ok(rep)
}

/// `p({A λ B}|_{λ=0}) = {p(A), p(B)}` on all pairs from `elements`.
pub fn check_homomorphism(fw: &FiniteW, elements: &[WElement]) -> Result<CheckReport, ZhuError> {
    let ctx = fw.context();
    let mut rep = CheckReport::new("projection is a Poisson homomorphism");
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let up = zhu_project(&ctx.w_bracket(a, b)?.coeff(0));
            let down = fw.bracket(&zhu_project(a.representative()), &zhu_project(b.representative()))?;
            let d = up.poly() - down.poly();
            rep.record("homomorphism", format!("pair ({}, {})", i, j), (!d.is_zero()).then(|| d.to_string()));
        }
    }
    Ok(rep)
}

/// Skewsymmetry, Jacobi and Leibniz of the finite bracket on generators.
pub fn check_poisson_axioms(fw: &FiniteW) -> Result<CheckReport, ZhuError> {
    let mut rep = CheckReport::new("finite Poisson axioms");
    let g = fw.generators();
    let par = |p: &FinitePoly| p.poly().parity().unwrap_or_default();
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            let ab = fw.bracket(a, b)?;
            let ba = fw.bracket(b, a)?;
            let s = Scalar::from_int(-par(a).koszul(par(b)));
            let d = ab.poly() - &ba.poly().scale(&s);
            rep.record("skewsymmetry", format!("({}, {})", i, j), (!d.is_zero()).then(|| d.to_string()));
            for (l, c) in g.iter().enumerate() {
                // {a,{b,c}} = {{a,b},c} + (-1)^{p(a)p(b)} {b,{a,c}}
                let lhs = fw.bracket(a, &fw.bracket(b, c)?)?;
                let r1 = fw.bracket(&ab, c)?;
                let r2 = fw.bracket(b, &fw.bracket(a, c)?)?;
                let mut d = lhs.poly() - r1.poly();
                d.add_scaled(r2.poly(), &Scalar::from_int(-par(a).koszul(par(b))));
                rep.record("jacobi", format!("({}, {}, {})", i, j, l), (!d.is_zero()).then(|| d.to_string()));
                // {a, bc} = {a,b}c + (-1)^{p(a)p(b)} b{a,c}
                let bc = FinitePoly(b.poly() * c.poly());
                let lhs = fw.bracket(a, &bc)?;
                let mut want = ab.poly() * c.poly();
                want.add_scaled(&(b.poly() * fw.bracket(a, c)?.poly()), &Scalar::from_int(par(a).koszul(par(b))));
                let d = lhs.poly() - &want;
                rep.record("leibniz", format!("({}, {}, {})", i, j, l), (!d.is_zero()).then(|| d.to_string()));
            }
        }
    }
    Ok(rep)
}

/// Each generator is `ad n`-invariant in `S(g,f)`.
pub fn check_finite_invariance(fw: &FiniteW) -> CheckReport {
    let mut rep = CheckReport::new("ad n invariance of finite generators");
    for (l, p) in fw.labels().iter().zip(fw.generators()) {
        let m = is_finite_w_element(fw.context(), p);
        rep.record("ad n", l.clone(), m.witness.map(|w| format!("{} gives {}", w.n, w.residual)));
    }
    rep
}

/// Generalized binomial `C(r, j)`.
fn binom_q(r: &Q, j: u32) -> Q {
    let mut acc = Q::one();
    for i in 0..j {
        acc = acc * (r - Q::from_integer(i.into())) / Q::from_integer((i + 1).into());
    }
    acc
}

fn factorial(j: u32) -> Q {
    (1..=j).fold(Q::one(), |a, i| a * Q::from_integer(i.into()))
}

/// Checks the twisted Zhu bracket of the current algebra on basis pairs:
/// the binomial formula gives `{u_a,u_b} = [u_a,u_b] - j_a k (u_a|u_b)`, and
/// `v_a = a - k(x|a)` intertwines it with `[a,b]`.
pub fn check_zhu_current(alg: &LieSuperalgebra, k: &Scalar) -> CheckReport {
    let sp = alg.space();
    let br = alg.current_bracket(k);
    let x = &alg.sl2().x;
    let mut rep = CheckReport::new(format!("twisted Zhu bracket of the currents of {}", alg.name()));
    let v_of = |a: &Elem| -> DiffPoly {
        let mut p = alg.elem_poly(a);
        p.add_term(Default::default(), -(k * &Scalar::from_q(alg.form(x, a))));
        p
    };
    for a in 0..alg.dim() {
        let ja = alg.grade(a).to_rational();
        let delta_minus_one = -ja.clone();
        for b in 0..alg.dim() {
            let lam = br.br(&DiffPoly::var(sp, a), &DiffPoly::var(sp, b));
            let mut zhu = DiffPoly::zero(sp);
            for (j, c) in lam.coeffs() {
                let w = binom_q(&delta_minus_one, j) * factorial(j);
                if !w.is_zero() {
                    zhu.add_scaled(c, &Scalar::from_q(w));
                }
            }
            let mut want = alg.elem_poly(&alg.bracket_basis(a, b));
            let c = k * &Scalar::from_q(ja.clone() * alg.form_basis(a, b));
            want.add_term(Default::default(), -c);
            let loc = format!("({}, {})", alg.basis_name(a), alg.basis_name(b));
            let d = &zhu - &want;
            rep.record("binomial bracket", loc.clone(), (!d.is_zero()).then(|| d.to_string()));
            // constants are central, so {v_a, v_b} = {u_a, u_b}
            let d = &zhu - &v_of(&alg.bracket_basis(a, b));
            rep.record("v intertwines", loc, (!d.is_zero()).then(|| d.to_string()));
        }
    }
    rep
}

/// Compares `zhu_project` of the closed-form affine generators with the `ψ` formulas.
pub fn check_projection_of_generators(ctx: &ReductionContext) -> Result<CheckReport, ZhuError> {
    let alg = ctx.algebra();
    let mut rep = CheckReport::new(format!("projection of affine generators for {}", alg.name()));
    let (a, _) = wred::gf0_dual_pair(alg);
    for v in &a {
        let got = zhu_project(&wred::phi_v(ctx, v)?);
        let want = psi_v(ctx, v)?;
        let d = got.poly() - want.poly();
        rep.record("p(phi_v) = psi_v", alg.render(v), (!d.is_zero()).then(|| format!("{} vs {}", got, want)));
    }
    for i in alg.grading_component(-HalfInt::HALF) {
        let w = alg.basis(i);
        let got = zhu_project(&wred::phi_w(ctx, &w)?);
        let want = psi_w(ctx, &w)?;
        let d = got.poly() - want.poly();
        rep.record("p(phi_w) = psi_w", alg.render(&w), (!d.is_zero()).then(|| format!("{} vs {}", got, want)));
    }
    let got = zhu_project(&wred::phi_f(ctx)?);
    let want = psi_f(ctx)?;
    let d = got.poly() - want.poly();
    rep.record("p(phi_f) = psi_f", "f", (!d.is_zero()).then(|| format!("{} vs {}", got, want)));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::builtin;
    use crate::text;

    #[test]
    fn projection_kills_derivatives() {
        let alg = builtin("spo(2|1)").unwrap();
        let p = text::parse_diffpoly(alg.space(), "f_ev + 1/2 f_od*e_od - 1/4 h^2 + 1/4 e_od*∂(e_od) - 1/2 ∂(h)").unwrap();
        let want = text::parse_diffpoly(alg.space(), "f_ev + 1/2 f_od*e_od - 1/4 h^2").unwrap();
        assert_eq!(zhu_project(&p).into_poly(), want);
        let dh = text::parse_diffpoly(alg.space(), "∂(h)").unwrap();
        assert!(zhu_project(&dh).is_zero());
        assert!(FinitePoly::new(dh).is_err());
    }

    #[test]
    fn zhu_current_identity() {
        for name in ["sl(2)", "spo(2|1)", "spo(2|3)"] {
            let alg = builtin(name).unwrap();
            for k in [Scalar::k(), Scalar::zero(), Scalar::from_int(3)] {
                let rep = check_zhu_current(&alg, &k);
                assert!(rep.passed(), "{}", rep);
            }
        }
    }
}
