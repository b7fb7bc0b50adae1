//! The classical BRST complex `S(R)`, `R = Cur_k(g) ⊕ R_ch ⊕ R_ne`.
//!
//! Generators are ordered: currents (named after the basis of `g`), then
//! `phi_X` (φ_α), `phiup_X` (φ^α) for `X` in `n = g_{>0}`, then `Phi_X` (Φ_α)
//! for `X` in `g(1/2)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::diffpoly::{DiffPoly, GeneratorSpace, Parity};
use crate::lambda::{LambdaBracket, LambdaPoly};
use crate::linalg;
use crate::report::CheckReport;
use crate::scalar::{q, Scalar};
use crate::superalgebra::{DualBases, Elem, LieSuperalgebra};
use crate::weight::HalfInt;

/// Generator space and base bracket of the complex.
pub struct BrstSpace {
    alg: LieSuperalgebra,
    k: Scalar,
    space: Arc<GeneratorSpace>,
    bracket: LambdaBracket,
    /// Basis indices of `n = g_{>0}` (the set `S`).
    pos: Vec<usize>,
    /// Basis indices of `g(1/2)`.
    half: Vec<usize>,
    dual: DualBases,
    /// `v^β ∈ g(1/2)` with `(f|[u_α, v^β]) = δ_{αβ}`.
    v_up: Vec<Elem>,
}

/// The distinguished elements of the complex.
#[derive(Clone, Debug)]
pub struct BrstElements {
    /// The four summands of `d`, in the displayed order.
    pub d_parts: [DiffPoly; 4],
    pub d: DiffPoly,
    pub l_g: DiffPoly,
    pub l_ch: DiffPoly,
    pub l_ne: DiffPoly,
    pub l: DiffPoly,
    /// `J_a` per basis index.
    pub j: BTreeMap<usize, DiffPoly>,
    /// `K_a` per basis index of grade at most one.
    pub k: BTreeMap<usize, DiffPoly>,
}

impl BrstElements {
    /// `d` with one summand removed (for fault injection).
    pub fn d_without(&self, part: usize) -> DiffPoly {
        let mut out = DiffPoly::zero(self.d.space());
        for (i, p) in self.d_parts.iter().enumerate() {
            if i != part {
                out = &out + p;
            }
        }
        out
    }
}

impl BrstSpace {
    pub fn new(alg: &LieSuperalgebra, k: &Scalar) -> Self {
        let n = alg.dim();
        let pos: Vec<usize> = (0..n).filter(|&i| alg.grade(i) > HalfInt::ZERO).collect();
        let half = alg.grading_component(HalfInt::HALF);
        let mut gens: Vec<(String, Parity)> =
            (0..n).map(|i| (alg.basis_name(i).to_string(), alg.parity(i))).collect();
        for &a in &pos {
            gens.push((format!("phi_{}", alg.basis_name(a)), alg.parity(a).flip()));
        }
        for &a in &pos {
            gens.push((format!("phiup_{}", alg.basis_name(a)), alg.parity(a).flip()));
        }
        for &a in &half {
            gens.push((format!("Phi_{}", alg.basis_name(a)), alg.parity(a)));
        }
        let space = GeneratorSpace::new(format!("BRST({})", alg.name()), gens)
            .expect("BRST generator names are distinct");
        let dual = alg.dual_bases().expect("valid algebra has dual bases");

        let mut bracket = LambdaBracket::new(&space);
        for a in 0..n {
            for b in a..n {
                let mut v = LambdaPoly::constant(alg.elem_poly_in(&space, alg.bracket_basis(a, b), 0));
                let c = Scalar::from_q(alg.form_basis(a, b).clone());
                v.add_coeff(1, &DiffPoly::constant(&space, k * &c));
                bracket.define(a, b, v).expect("current bracket");
            }
        }
        let s = pos.len();
        for i in 0..s {
            bracket
                .define(n + i, n + s + i, LambdaPoly::constant_scalar(&space, Scalar::one()))
                .expect("charged fermions");
        }
        let f = &alg.sl2().f;
        for (i, &a) in half.iter().enumerate() {
            for (j, &b) in half.iter().enumerate().skip(i) {
                let v = alg.form(f, alg.bracket_basis(a, b));
                if !v.is_zero() {
                    bracket
                        .define(n + 2 * s + i, n + 2 * s + j, LambdaPoly::constant_scalar(&space, Scalar::from_q(v)))
                        .expect("neutral fermions");
                }
            }
        }

        let m = half.len();
        let mut mat = linalg::zeros(m, m);
        for a in 0..m {
            for g in 0..m {
                mat[a][g] = alg.form(f, alg.bracket_basis(half[a], half[g]));
            }
        }
        let inv = linalg::inverse(&mat).expect("(f|[., .]) is nondegenerate on g(1/2)");
        let v_up = (0..m)
            .map(|b| {
                let mut v = alg.zero();
                for g in 0..m {
                    v.add_scaled(&alg.basis(half[g]), &inv[g][b]);
                }
                v
            })
            .collect();

        BrstSpace {
            alg: alg.clone(),
            k: k.clone(),
            space,
            bracket,
            pos,
            half,
            dual,
            v_up,
        }
    }

    pub fn algebra(&self) -> &LieSuperalgebra {
        &self.alg
    }

    pub fn level(&self) -> &Scalar {
        &self.k
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn bracket(&self) -> &LambdaBracket {
        &self.bracket
    }

    /// Basis indices of `n`.
    pub fn positive(&self) -> &[usize] {
        &self.pos
    }

    pub fn half(&self) -> &[usize] {
        &self.half
    }

    fn n(&self) -> usize {
        self.alg.dim()
    }

    /// The current `a` as a linear polynomial.
    pub fn current(&self, a: &Elem) -> DiffPoly {
        self.alg.elem_poly_in(&self.space, a, 0)
    }

    /// `φ_α` for the `α`-th element of `S`.
    pub fn phi(&self, alpha: usize) -> DiffPoly {
        DiffPoly::var(&self.space, self.n() + alpha)
    }

    /// `φ^α` for the `α`-th element of `S`.
    pub fn phi_up(&self, alpha: usize) -> DiffPoly {
        DiffPoly::var(&self.space, self.n() + self.pos.len() + alpha)
    }

    /// `Φ_γ` for the `γ`-th element of `g(1/2)`.
    pub fn big_phi_gen(&self, gamma: usize) -> DiffPoly {
        DiffPoly::var(&self.space, self.n() + 2 * self.pos.len() + gamma)
    }

    /// `φ_a = φ_{π₊ a}`.
    pub fn phi_of(&self, a: &Elem) -> DiffPoly {
        let mut p = DiffPoly::zero(&self.space);
        for (i, &b) in self.pos.iter().enumerate() {
            let c = a.coord(b);
            if !c.is_zero() {
                p.add_scaled(&self.phi(i), &Scalar::from_q(c.clone()));
            }
        }
        p
    }

    /// `φ^c = Σ_β (u_β|c) φ^β`.
    pub fn phi_up_of(&self, c: &Elem) -> DiffPoly {
        let mut p = DiffPoly::zero(&self.space);
        for (i, &b) in self.pos.iter().enumerate() {
            let v = self.alg.form(&self.alg.basis(b), c);
            if !v.is_zero() {
                p.add_scaled(&self.phi_up(i), &Scalar::from_q(v));
            }
        }
        p
    }

    /// `Φ_a = Φ_{π_{1/2} a}`.
    pub fn big_phi_of(&self, a: &Elem) -> DiffPoly {
        let mut p = DiffPoly::zero(&self.space);
        for (i, &b) in self.half.iter().enumerate() {
            let c = a.coord(b);
            if !c.is_zero() {
                p.add_scaled(&self.big_phi_gen(i), &Scalar::from_q(c.clone()));
            }
        }
        p
    }

    /// `u_α` for the `α`-th element of `S`.
    pub fn u(&self, alpha: usize) -> Elem {
        self.alg.basis(self.pos[alpha])
    }

    fn sign(&self, p: Parity) -> Scalar {
        Scalar::from_int(if p.is_odd() { -1 } else { 1 })
    }

    /// `J_a = a + Σ_α φ^α φ_{[u_α, a]}`.
    pub fn j_of(&self, a: &Elem) -> DiffPoly {
        let mut p = self.current(a);
        for al in 0..self.pos.len() {
            let br = self.alg.bracket(&self.u(al), a);
            p = &p + &(&self.phi_up(al) * &self.phi_of(&br));
        }
        p
    }

    /// `K_a = J_{π≤ a} - s(a) Φ_a - (a|f)` for homogeneous `a`.
    pub fn k_of(&self, a: &Elem) -> DiffPoly {
        let par = self.alg.parity_of_elem(a).expect("homogeneous element");
        let low = self.alg.project(a, |g| g <= HalfInt::ZERO);
        let mut p = self.j_of(&low);
        p = &p - &self.big_phi_of(a).scale(&self.sign(par));
        let c = self.alg.form(a, &self.alg.sl2().f);
        p = &p - &DiffPoly::constant(&self.space, Scalar::from_q(c));
        p
    }

    /// Conformal weights `Δ` of the generators.
    pub fn weights(&self) -> Vec<HalfInt> {
        let one = HalfInt::ONE;
        let mut w: Vec<HalfInt> = (0..self.n()).map(|i| one - self.alg.grade(i)).collect();
        for &a in &self.pos {
            w.push(one - self.alg.grade(a));
        }
        for &a in &self.pos {
            w.push(self.alg.grade(a));
        }
        for _ in &self.half {
            w.push(HalfInt::HALF);
        }
        w
    }

    /// Builds `d`, `L`, `J` and `K`.
    pub fn elements(&self) -> BrstElements {
        let alg = &self.alg;
        let sp = &self.space;
        let s = self.pos.len();
        let f = &alg.sl2().f;

        let mut d1 = DiffPoly::zero(sp);
        for al in 0..s {
            let t = &self.phi_up(al) * &self.current(&self.u(al));
            d1.add_scaled(&t, &self.sign(alg.parity(self.pos[al])));
        }
        let mut d2 = DiffPoly::zero(sp);
        for (g, &b) in self.half.iter().enumerate() {
            let al = self.pos.iter().position(|&x| x == b).expect("g(1/2) lies in n");
            d2 = &d2 + &(&self.phi_up(al) * &self.big_phi_gen(g));
        }
        let d3 = self.phi_up_of(f);
        let mut d4 = DiffPoly::zero(sp);
        for al in 0..s {
            for be in 0..s {
                let br = alg.bracket(&self.u(be), &self.u(al));
                let t = &(&self.phi_up(al) * &self.phi_up(be)) * &self.phi_of(&br);
                let c = self.sign(alg.parity(self.pos[al])).scale(&q(1, 2));
                d4.add_scaled(&t, &c);
            }
        }
        let d = &(&(&d1 + &d2) + &d3) + &d4;

        let two_k_inv = (&self.k * &Scalar::from_int(2)).inv().expect("level k must be a nonzero monomial");
        let mut l_g = self.current(&alg.sl2().x).partial();
        for a in 0..alg.dim() {
            let t = &self.current(&self.dual.upper[a]) * &self.current(&alg.basis(a));
            l_g.add_scaled(&t, &two_k_inv);
        }
        let mut l_ch = DiffPoly::zero(sp);
        for al in 0..s {
            let j = Scalar::from_q(alg.grade(self.pos[al]).to_rational());
            let t1 = &self.phi_up(al) * &self.phi(al).partial();
            l_ch.add_scaled(&t1, &-&j);
            let t2 = &self.phi_up(al).partial() * &self.phi(al);
            l_ch.add_scaled(&t2, &(&Scalar::one() - &j));
        }
        let mut l_ne = DiffPoly::zero(sp);
        for g in 0..self.half.len() {
            let t = &self.big_phi_of(&self.v_up[g]).partial() * &self.big_phi_gen(g);
            l_ne.add_scaled(&t, &Scalar::from_q(q(1, 2)));
        }
        let l = &(&l_g + &l_ch) + &l_ne;

        let j = (0..alg.dim()).map(|a| (a, self.j_of(&alg.basis(a)))).collect();
        let k = (0..alg.dim())
            .filter(|&a| alg.grade(a) <= HalfInt::ONE)
            .map(|a| (a, self.k_of(&alg.basis(a))))
            .collect();
        BrstElements {
            d_parts: [d1, d2, d3, d4],
            d,
            l_g,
            l_ch,
            l_ne,
            l,
            j,
            k,
        }
    }

    /// `d₍₀₎ A = {d λ A}|_{λ=0}`.
    pub fn apply_d0(&self, el: &BrstElements, a: &DiffPoly) -> DiffPoly {
        self.bracket.br(&el.d, a).at_zero()
    }

    /// `{d λ d} = 0` and `d₍₀₎² = 0` on every generator.
    pub fn check_d_squared(&self, d: &DiffPoly) -> CheckReport {
        let mut rep = CheckReport::new("d squared");
        let dd = self.bracket.br(d, d);
        rep.record("{d λ d} = 0", "", (!dd.is_zero()).then(|| dd.to_string()));
        for g in 0..self.space.len() {
            let x = DiffPoly::var(&self.space, g);
            let r = self.bracket.br(d, &self.bracket.br(d, &x).at_zero()).at_zero();
            rep.record(
                "d0^2 = 0 on generators",
                self.space.name(g),
                (!r.is_zero()).then(|| r.to_string()),
            );
        }
        rep
    }

    /// The four bracket formulas for `{d λ ·}` on generators.
    pub fn check_d_formulas(&self, el: &BrstElements) -> CheckReport {
        let mut rep = CheckReport::new("d on generators");
        let alg = &self.alg;
        let sp = &self.space;
        let s = self.pos.len();
        let f = &alg.sl2().f;
        let cmp = |rep: &mut CheckReport, name: &str, loc: &str, got: LambdaPoly, want: LambdaPoly| {
            let diff = &got - &want;
            rep.record(name, loc, (!diff.is_zero()).then(|| format!("got {} expected {}", got, want)));
        };

        for a in 0..alg.dim() {
            let ea = alg.basis(a);
            let mut c0 = DiffPoly::zero(sp);
            for al in 0..s {
                let t = &self.phi_up(al) * &self.current(&alg.bracket(&self.u(al), &ea));
                c0.add_scaled(&t, &self.sign(alg.parity(self.pos[al])));
            }
            let ks = &self.k * &self.sign(alg.parity(a));
            let pu = self.phi_up_of(&ea);
            c0.add_scaled(&pu.partial(), &ks);
            let mut want = LambdaPoly::constant(c0);
            want.add_coeff(1, &pu.scale(&ks));
            let got = self.bracket.br(&el.d, &self.current(&ea));
            cmp(&mut rep, "{d λ a}", alg.basis_name(a), got, want);
        }

        for al in 0..s {
            let a = self.u(al);
            let par = alg.parity(self.pos[al]);
            let mut w = self.current(&a);
            w = &w + &DiffPoly::constant(sp, Scalar::from_q(alg.form(&a, f)));
            w.add_scaled(&self.big_phi_of(&a), &self.sign(par));
            for be in 0..s {
                let t = &self.phi_up(be) * &self.phi_of(&alg.bracket(&self.u(be), &a));
                w = &w + &t;
            }
            let got = self.bracket.br(&el.d, &self.phi(al));
            cmp(&mut rep, "{d λ phi_a}", alg.basis_name(self.pos[al]), got, LambdaPoly::constant(w));
        }

        for al in 0..s {
            let a = &self.dual.upper[self.pos[al]];
            let mut w = DiffPoly::zero(sp);
            for be in 0..s {
                let t = &self.phi_up(be) * &self.phi_up_of(&alg.bracket(&self.u(be), a));
                let c = self.sign(alg.parity(self.pos[be])).scale(&q(1, 2));
                w.add_scaled(&t, &c);
            }
            let got = self.bracket.br(&el.d, &self.phi_up(al));
            cmp(&mut rep, "{d λ phi^a}", alg.basis_name(self.pos[al]), got, LambdaPoly::constant(w));
        }

        for (g, &b) in self.half.iter().enumerate() {
            let a = alg.basis(b);
            let w = self.phi_up_of(&alg.bracket(&a, f));
            let got = self.bracket.br(&el.d, &self.big_phi_gen(g));
            cmp(&mut rep, "{d λ Phi_a}", alg.basis_name(b), got, LambdaPoly::constant(w));
        }
        rep
    }

    /// The three-case table for `{K_a λ K_b}` over basis pairs of grade at most one.
    pub fn check_k_brackets(&self, el: &BrstElements) -> CheckReport {
        let mut rep = CheckReport::new("K brackets");
        let alg = &self.alg;
        let sp = &self.space;
        for (&a, ka) in &el.k {
            for (&b, kb) in &el.k {
                let (ga, gb) = (alg.grade(a), alg.grade(b));
                let got = self.bracket.br(ka, kb);
                let (name, want) = if ga <= HalfInt::ZERO && gb <= HalfInt::ZERO {
                    let br = alg.bracket_basis(a, b);
                    let mut w = LambdaPoly::constant(self.k_of(br));
                    let c = &self.k * &Scalar::from_q(alg.form_basis(a, b).clone());
                    w.add_coeff(1, &DiffPoly::constant(sp, c));
                    ("{K_a λ K_b}, a, b in g(<=0)", w)
                } else if ga == HalfInt::HALF && gb == HalfInt::HALF {
                    let c = alg.form(alg.bracket_basis(a, b), &alg.sl2().f);
                    let alt = self.k_of(alg.bracket_basis(a, b)).scale(&Scalar::from_int(-1));
                    let w = LambdaPoly::constant(DiffPoly::constant(sp, Scalar::from_q(c)));
                    if LambdaPoly::constant(alt) != w {
                        rep.fail("-K_[a,b] = ([a,b]|f)", format!("({}, {})", alg.basis_name(a), alg.basis_name(b)), "mismatch");
                    }
                    ("{K_a λ K_b}, a, b in g(1/2)", w)
                } else {
                    ("{K_a λ K_b}, other pairs", LambdaPoly::zero(sp))
                };
                let diff = &got - &want;
                rep.record(
                    name,
                    format!("({}, {})", alg.basis_name(a), alg.basis_name(b)),
                    (!diff.is_zero()).then(|| format!("got {} expected {}", got, want)),
                );
            }
        }
        rep
    }

    /// `{J_a λ J_b} = J_{[a,b]} + kλ(a|b)` when `a, b` lie on the same side of zero.
    pub fn check_j_closure(&self, el: &BrstElements) -> CheckReport {
        let mut rep = CheckReport::new("J closure");
        let alg = &self.alg;
        for (&a, ja) in &el.j {
            for (&b, jb) in &el.j {
                let (ga, gb) = (alg.grade(a), alg.grade(b));
                let same = (ga >= HalfInt::ZERO && gb >= HalfInt::ZERO)
                    || (ga <= HalfInt::ZERO && gb <= HalfInt::ZERO);
                if !same {
                    continue;
                }
                let mut want = LambdaPoly::constant(self.j_of(alg.bracket_basis(a, b)));
                let c = &self.k * &Scalar::from_q(alg.form_basis(a, b).clone());
                want.add_coeff(1, &DiffPoly::constant(&self.space, c));
                let got = self.bracket.br(ja, jb);
                let diff = &got - &want;
                rep.record(
                    "{J_a λ J_b} = J_[a,b] + kλ(a|b)",
                    format!("({}, {})", alg.basis_name(a), alg.basis_name(b)),
                    (!diff.is_zero()).then(|| format!("got {} expected {}", got, want)),
                );
            }
        }
        rep
    }

    /// The energy-momentum formulas and the conformal weights from `H = L₍₁₎`.
    pub fn check_l_action(&self, el: &BrstElements) -> CheckReport {
        let mut rep = CheckReport::new("energy-momentum field");
        let alg = &self.alg;
        let sp = &self.space;
        let s = self.pos.len();
        let expect = |x: &DiffPoly, w: HalfInt| -> LambdaPoly {
            let mut r = LambdaPoly::constant(x.partial());
            r.add_coeff(1, &x.scale_q(&w.to_rational()));
            r
        };
        let cmp = |rep: &mut CheckReport, name: &str, loc: &str, got: LambdaPoly, want: LambdaPoly| {
            let diff = &got - &want;
            rep.record(name, loc, (!diff.is_zero()).then(|| format!("got {} expected {}", got, want)));
        };
        for a in 0..alg.dim() {
            let ua = self.current(&alg.basis(a));
            let mut want = expect(&ua, HalfInt::ONE - alg.grade(a));
            let c = &self.k * &Scalar::from_q(-alg.form(&alg.sl2().x, &alg.basis(a)));
            want.add_coeff(2, &DiffPoly::constant(sp, c));
            cmp(&mut rep, "{L^g λ u_a}", alg.basis_name(a), self.bracket.br(&el.l_g, &ua), want);
        }
        for al in 0..s {
            let j = alg.grade(self.pos[al]);
            let nm = alg.basis_name(self.pos[al]);
            let p = self.phi(al);
            cmp(&mut rep, "{L^ch λ phi_a}", nm, self.bracket.br(&el.l_ch, &p), expect(&p, HalfInt::ONE - j));
            let p = self.phi_up(al);
            cmp(&mut rep, "{L^ch λ phi^a}", nm, self.bracket.br(&el.l_ch, &p), expect(&p, j));
        }
        for (g, &b) in self.half.iter().enumerate() {
            let p = self.big_phi_gen(g);
            cmp(&mut rep, "{L^ne λ Phi_a}", alg.basis_name(b), self.bracket.br(&el.l_ne, &p), expect(&p, HalfInt::HALF));
        }
        let weights = self.weights();
        for (g, w) in weights.iter().enumerate() {
            let x = DiffPoly::var(sp, g);
            let h = self.bracket.br(&el.l, &x).coeff(1);
            let want = x.scale_q(&w.to_rational());
            rep.record(
                "conformal weight from L_(1)",
                sp.name(g),
                (h != want).then(|| format!("got {} expected {}", h, want)),
            );
        }
        rep
    }

    /// Every identity of the complex.
    pub fn check_all(&self, el: &BrstElements) -> CheckReport {
        let mut rep = CheckReport::new(format!("BRST complex of {}", self.alg.name()));
        rep.extend(self.check_d_squared(&el.d));
        rep.extend(self.check_d_formulas(el));
        rep.extend(self.check_k_brackets(el));
        rep.extend(self.check_j_closure(el));
        rep.extend(self.check_l_action(el));
        rep
    }
}

/// Builds the complex and its distinguished elements.
pub fn build_brst(alg: &LieSuperalgebra, k: &Scalar) -> (BrstSpace, BrstElements) {
    let sp = BrstSpace::new(alg, k);
    let el = sp.elements();
    (sp, el)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::builtin;

    #[test]
    fn identities_hold_for_builtins() {
        for name in ["sl(2)", "spo(2|1)", "spo(2|3)"] {
            let alg = builtin(name).unwrap();
            let (sp, el) = build_brst(&alg, &Scalar::k());
            let rep = sp.check_all(&el);
            assert!(rep.passed(), "{}", rep);
        }
    }

    #[test]
    fn d_is_odd_and_l_even() {
        let alg = builtin("spo(2|1)").unwrap();
        let (_, el) = build_brst(&alg, &Scalar::k());
        assert_eq!(el.d.parity(), Some(Parity::Odd));
        assert_eq!(el.l.parity(), Some(Parity::Even));
    }

    #[test]
    fn dropping_phi_f_breaks_d_squared() {
        let alg = builtin("spo(2|1)").unwrap();
        let (sp, el) = build_brst(&alg, &Scalar::k());
        assert!(!sp.check_d_squared(&el.d_without(2)).passed());
    }
}
