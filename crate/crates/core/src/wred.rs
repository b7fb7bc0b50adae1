//! Hamiltonian reduction: the differential algebra `V(g,f,k)`, the `ad_λ n`
//! action, W-membership, generators and brackets expressed in generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::diffpoly::{DiffPoly, DiffSymbol, GeneratorSpace, Monomial, Parity};
use crate::lambda::{self, LambdaBracket, LambdaError, LambdaPoly};
use crate::linalg;
use crate::report::CheckReport;
use crate::scalar::{q, Scalar, Q};
use crate::superalgebra::{Elem, LieSuperalgebra};
use crate::weight::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WError {
    #[error("f is not a minimal nilpotent: {0}")]
    NotMinimal(String),
    #[error("element is not certified as a W-element: {0}")]
    Uncertified(String),
    #[error("generators are not triangular: {0}")]
    NotTriangular(String),
    #[error("no generator found: {0}")]
    NoSolution(String),
    #[error("the level must be {0}")]
    Level(String),
    #[error("{0} is not a polynomial in the generators")]
    NotInSpan(String),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

/// Data of `V(g,f,k) = S(C[∂] ⊗ g) / I`, `I` generated by `∂ⁿ(m + (f|m))`.
pub struct ReductionContext {
    alg: LieSuperalgebra,
    k: Scalar,
    bracket: LambdaBracket,
    /// `-(f|m)` for basis elements `m` of `g_{≥1}`.
    ideal: Vec<Option<Q>>,
    nilpotent: Vec<usize>,
    weights: Vec<HalfInt>,
}

/// Outcome of a W-membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// First violation of `ad_λ n (A) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: String,
    pub degree: u32,
    pub residual: String,
}

/// A representative in `S(C[∂] ⊗ g_{<1})`, certified only after the invariance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WElement {
    poly: DiffPoly,
    certified: bool,
}

impl WElement {
    pub fn uncertified(poly: DiffPoly) -> Self {
        WElement {
            poly,
            certified: false,
        }
    }

    pub fn representative(&self) -> &DiffPoly {
        &self.poly
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }
}

impl ReductionContext {
    pub fn new(alg: &LieSuperalgebra, k: &Scalar) -> Self {
        let f = &alg.sl2().f;
        let ideal = (0..alg.dim())
            .map(|a| (alg.grade(a) >= HalfInt::ONE).then(|| -alg.form(f, &alg.basis(a))))
            .collect();
        let nilpotent = (0..alg.dim()).filter(|&a| alg.grade(a) > HalfInt::ZERO).collect();
        let weights = (0..alg.dim()).map(|a| HalfInt::ONE - alg.grade(a)).collect();
        ReductionContext {
            alg: alg.clone(),
            k: k.clone(),
            bracket: alg.current_bracket(k),
            ideal,
            nilpotent,
            weights,
        }
    }

    pub fn algebra(&self) -> &LieSuperalgebra {
        &self.alg
    }

    pub fn level(&self) -> &Scalar {
        &self.k
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        self.alg.space()
    }

    /// The current-algebra bracket `{a λ b} = [a,b] + kλ(a|b)`.
    pub fn bracket(&self) -> &LambdaBracket {
        &self.bracket
    }

    /// Basis indices of `n = g_{>0}`.
    pub fn nilpotent(&self) -> &[usize] {
        &self.nilpotent
    }

    /// Conformal weights `1 - j` of the basis.
    pub fn weights(&self) -> &[HalfInt] {
        &self.weights
    }

    /// Whether basis element `a` survives in `V` (grade below one).
    pub fn is_reduced_symbol(&self, a: usize) -> bool {
        self.ideal[a].is_none()
    }

    pub fn poly(&self, v: &Elem) -> DiffPoly {
        self.alg.elem_poly(v)
    }

    /// Canonical representative modulo the differential ideal.
    pub fn reduce(&self, a: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero(self.space());
        'terms: for (m, c) in a.terms() {
            let mut c = c.clone();
            let mut keep = Vec::with_capacity(m.len());
            for s in m.symbols() {
                match &self.ideal[s.gen()] {
                    None => keep.push(*s),
                    Some(v) => {
                        if s.order > 0 || v.is_zero() {
                            continue 'terms;
                        }
                        debug_assert!(!s.odd);
                        c = c.scale(v);
                    }
                }
            }
            out.add_term(Monomial::from_sorted_unchecked(keep), c);
        }
        out
    }

    pub fn reduce_lambda(&self, p: &LambdaPoly) -> LambdaPoly {
        p.map_coeffs(|c| self.reduce(c))
    }

    /// `ad_λ n (A) = {n λ A} + I[λ]`.
    pub fn ad_lambda(&self, n: &Elem, a: &DiffPoly) -> LambdaPoly {
        self.reduce_lambda(&self.bracket.br(&self.poly(n), a))
    }

    /// Tests `ad_λ n (A) = 0` for every basis element `n` of `n`.
    pub fn is_w_element(&self, a: &DiffPoly) -> Membership {
        for &n in &self.nilpotent {
            let r = self.ad_lambda(&self.alg.basis(n), a);
            let first = r.coeffs().next().map(|(d, c)| (d, c.to_string()));
            if let Some((deg, residual)) = first {
                return Membership {
                    holds: false,
                    witness: Some(Witness {
                        n: self.alg.basis_name(n).to_string(),
                        degree: deg,
                        residual,
                    }),
                };
            }
        }
        Membership {
            holds: true,
            witness: None,
        }
    }

    /// Reduces `a` and sets the certification flag from [`Self::is_w_element`].
    pub fn check(&self, a: &DiffPoly) -> WElement {
        let poly = self.reduce(a);
        let certified = self.is_w_element(&poly).holds;
        WElement { poly, certified }
    }

    /// Like [`Self::check`] but fails for non-members.
    pub fn certify(&self, a: &DiffPoly) -> Result<WElement, WError> {
        let w = self.check(a);
        if w.certified {
            Ok(w)
        } else {
            Err(WError::Uncertified(a.to_string()))
        }
    }

    /// `{A λ B}` computed on representatives and reduced.
    pub fn w_bracket(&self, a: &WElement, b: &WElement) -> Result<LambdaPoly, WError> {
        for x in [a, b] {
            if !x.certified {
                return Err(WError::Uncertified(x.poly.to_string()));
            }
        }
        Ok(self.reduce_lambda(&self.bracket.bracket(&a.poly, &b.poly)?))
    }

    fn inverse_level(&self, factor: i64) -> Result<Scalar, WError> {
        (&self.k * &Scalar::from_int(factor))
            .inv()
            .map_err(|_| WError::Level("a nonzero monomial in k".into()))
    }
}

/// A family of W-elements with labels and leading vectors in `g^f`, together
/// with the data needed to rewrite W-elements in the labels.
#[derive(Clone)]
pub struct GeneratorFamily {
    labels: Vec<String>,
    elements: Vec<WElement>,
    leading: Vec<Elem>,
    label_space: Arc<GeneratorSpace>,
    /// Dual bases `{a_i}`, `{b_i}` of `g_f(0)` with `(a_i|b_j) = δ_{ij}`.
    pub dual_pair: (Vec<Elem>, Vec<Elem>),
    combined: Arc<GeneratorSpace>,
    /// Coordinates of `π_f(u_a)` in the leading basis, per basis index.
    coords: Vec<Vec<Q>>,
    /// Image of the leading symbol `Q_j` in the iteration, over `combined`.
    sigma: Vec<DiffPoly>,
}

impl std::fmt::Debug for GeneratorFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratorFamily").field("labels", &self.labels).finish()
    }
}

/// Linear order-zero part of `p` as an element, when its coefficients are rational.
pub fn linear_part(alg: &LieSuperalgebra, p: &DiffPoly) -> Option<Elem> {
    let mut v = alg.zero();
    let mut coords = v.coords().to_vec();
    for (m, c) in p.terms() {
        if let [s] = m.symbols() {
            if s.order == 0 {
                coords[s.gen()] += c.constant_value()?;
            }
        }
    }
    v = Elem::from_coords(coords);
    Some(v)
}

/// `π_f` of the linear order-zero part: the leading vector of a W-element.
pub fn leading_vector(ctx: &ReductionContext, p: &DiffPoly) -> Option<Elem> {
    let v = linear_part(ctx.algebra(), p)?;
    let lead = ctx.algebra().project_f(&v);
    (!lead.is_zero()).then_some(lead)
}

impl GeneratorFamily {
    /// Assembles a family. `leading[i]` must be a basis of `g^f` (in any order).
    pub fn new(
        ctx: &ReductionContext,
        labels: Vec<String>,
        elements: Vec<WElement>,
        leading: Vec<Elem>,
        dual_pair: (Vec<Elem>, Vec<Elem>),
    ) -> Result<Self, WError> {
        let alg = ctx.algebra();
        let r = leading.len();
        if labels.len() != r || elements.len() != r {
            return Err(WError::NotTriangular("labels, elements and leading vectors differ in number".into()));
        }
        if r != alg.g_f().len() {
            return Err(WError::NotTriangular(format!("{} leading vectors for dim g^f = {}", r, alg.g_f().len())));
        }
        let mut gens = Vec::new();
        for (l, v) in labels.iter().zip(&leading) {
            let p = alg
                .parity_of_elem(v)
                .ok_or_else(|| WError::NotTriangular(format!("leading vector of {} is inhomogeneous", l)))?;
            gens.push((l.clone(), p));
        }
        let label_space = GeneratorSpace::new("W generators", gens.clone())
            .map_err(|e| WError::NotTriangular(e.to_string()))?;
        for (i, (_, p)) in gens.clone().into_iter().enumerate() {
            gens.push((format!("lead_{}", i), p));
        }
        let combined = GeneratorSpace::new("W generators with leading symbols", gens)
            .map_err(|e| WError::NotTriangular(e.to_string()))?;

        // coordinates of π_f(u_a) in the leading basis
        let n = alg.dim();
        let a_mat: linalg::Matrix = (0..n)
            .map(|i| leading.iter().map(|v| v.coord(i).clone()).collect())
            .collect();
        if linalg::rank(&a_mat) < r {
            return Err(WError::NotTriangular("leading vectors are linearly dependent".into()));
        }
        let mut coords = Vec::with_capacity(n);
        for a in 0..n {
            let pf = alg.project_f(&alg.basis(a));
            let c = linalg::solve(&a_mat, pf.coords())
                .ok_or_else(|| WError::NotTriangular("leading vectors do not span g^f".into()))?;
            coords.push(c);
        }

        let mut fam = GeneratorFamily {
            labels,
            elements,
            leading,
            label_space,
            dual_pair,
            combined,
            coords,
            sigma: Vec::new(),
        };

        // p(Φ_i) = Σ_j T_ij Q_j + R_i
        let mut t: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); r]; r];
        let mut rem = Vec::with_capacity(r);
        for i in 0..r {
            let p = fam.project(ctx, &fam.elements[i].poly);
            let mut rest = p.clone();
            for j in 0..r {
                let m = Monomial::from_symbol(fam.combined.symbol(r + j, 0));
                t[i][j] = p.coeff(&m);
                rest.add_term(m, -&t[i][j]);
            }
            rem.push(rest);
        }
        let tinv = invert_scalar(&t).ok_or_else(|| {
            WError::NotTriangular("matrix of leading coefficients is not invertible over Laurent monomials".into())
        })?;
        // Q_j = Σ_i Tinv_ji (L_i - R_i)
        fam.sigma = (0..r)
            .map(|j| {
                let mut s = DiffPoly::zero(&fam.combined);
                for i in 0..r {
                    if tinv[j][i].is_zero() {
                        continue;
                    }
                    let li = DiffPoly::var(&fam.combined, i);
                    s.add_scaled(&(&li - &rem[i]), &tinv[j][i]);
                }
                s
            })
            .collect();
        Ok(fam)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> &[WElement] {
        &self.elements
    }

    pub fn element(&self, label: &str) -> Option<&WElement> {
        self.labels.iter().position(|l| l == label).map(|i| &self.elements[i])
    }

    pub fn leading(&self) -> &[Elem] {
        &self.leading
    }

    pub fn label_space(&self) -> &Arc<GeneratorSpace> {
        &self.label_space
    }

    pub fn all_certified(&self) -> bool {
        self.elements.iter().all(|e| e.certified)
    }

    /// Symbol-wise projection onto `S(C[∂] ⊗ g^f)`, written in the leading symbols.
    fn project(&self, ctx: &ReductionContext, a: &DiffPoly) -> DiffPoly {
        let r = self.len();
        let reduced = ctx.reduce(a);
        reduced.map_symbols(&self.combined, |s| {
            let mut img = DiffPoly::zero(&self.combined);
            for (j, c) in self.coords[s.gen()].iter().enumerate() {
                if !c.is_zero() {
                    img.add_scaled(
                        &DiffPoly::symbol(&self.combined, r + j, s.order),
                        &Scalar::from_q(c.clone()),
                    );
                }
            }
            img
        })
    }

    /// Rewrites a W-element as a differential polynomial in the labels.
    /// The result is not checked; see [`Self::express`].
    pub fn express_unchecked(&self, ctx: &ReductionContext, a: &DiffPoly) -> Result<DiffPoly, WError> {
        let r = self.len();
        let mut x = self.project(ctx, a);
        for _ in 0..64 {
            if x.symbols().iter().all(|s| s.gen() < r) {
                let ls = self.label_space.clone();
                return Ok(x.map_symbols(&ls, |s| DiffPoly::from_symbol(&ls, s)));
            }
            let comb = self.combined.clone();
            x = x.map_symbols(&comb, |s| {
                if s.gen() < r {
                    DiffPoly::from_symbol(&comb, s)
                } else {
                    self.sigma[s.gen() - r].partial_n(s.order)
                }
            });
        }
        Err(WError::NotTriangular("rewriting did not terminate".into()))
    }

    /// Derivative-free rewriting: `a` without ∂-symbols as a polynomial in the
    /// labels, using the finite shadows of the generators.
    pub fn express_finite_unchecked(&self, ctx: &ReductionContext, a: &DiffPoly) -> Result<DiffPoly, WError> {
        let r = self.len();
        let sigma: Vec<DiffPoly> = self
            .sigma
            .iter()
            .map(|s| s.filter_terms(|m, _| m.max_order() == 0))
            .collect();
        let mut x = self.project(ctx, a).filter_terms(|m, _| m.max_order() == 0);
        for _ in 0..64 {
            if x.symbols().iter().all(|s| s.gen() < r) {
                let ls = self.label_space.clone();
                return Ok(x.map_symbols(&ls, |s| DiffPoly::from_symbol(&ls, s)));
            }
            let comb = self.combined.clone();
            x = x.map_symbols(&comb, |s| {
                if s.gen() < r {
                    DiffPoly::from_symbol(&comb, s)
                } else {
                    sigma[s.gen() - r].clone()
                }
            });
        }
        Err(WError::NotTriangular("rewriting did not terminate".into()))
    }

    /// Rewrites `a` in the labels and checks the round trip exactly.
    pub fn express(&self, ctx: &ReductionContext, a: &DiffPoly) -> Result<DiffPoly, WError> {
        let p = self.express_unchecked(ctx, a)?;
        if self.evaluate(&p) != ctx.reduce(a) {
            return Err(WError::NotInSpan(a.to_string()));
        }
        Ok(p)
    }

    pub fn express_lambda(&self, ctx: &ReductionContext, a: &LambdaPoly) -> Result<LambdaPoly, WError> {
        let mut out = LambdaPoly::zero(&self.label_space);
        for (n, c) in a.coeffs() {
            out.add_coeff(n, &self.express(ctx, c)?);
        }
        Ok(out)
    }

    /// Substitutes the generators for the labels.
    pub fn evaluate(&self, p: &DiffPoly) -> DiffPoly {
        let space = self.elements.first().map(|e| e.poly.space().clone());
        match space {
            None => DiffPoly::zero(p.space()),
            Some(sp) => p.map_symbols(&sp, |s| self.elements[s.gen()].poly.partial_n(s.order)),
        }
    }

    /// `{Φ_i λ Φ_j}` for `i ≤ j`, expressed in the labels.
    pub fn bracket_table(&self, ctx: &ReductionContext) -> Result<Vec<TableEntry>, WError> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                let raw = ctx.w_bracket(&self.elements[i], &self.elements[j])?;
                out.push(TableEntry {
                    left: i,
                    right: j,
                    value: self.express_lambda(ctx, &raw)?,
                });
            }
        }
        Ok(out)
    }

    /// The λ-bracket on the free algebra of labels defined by a table.
    pub fn label_bracket(&self, table: &[TableEntry]) -> Result<LambdaBracket, WError> {
        let mut br = LambdaBracket::new(&self.label_space);
        for e in table {
            br.define(e.left, e.right, e.value.clone())?;
        }
        Ok(br)
    }
}

/// One row of a generator bracket table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub left: usize,
    pub right: usize,
    pub value: LambdaPoly,
}

fn invert_scalar(t: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = t.len();
    let mut a: Vec<Vec<Scalar>> = t
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| a[i][c].inv().is_ok())?;
        a.swap(c, p);
        let inv = a[c][c].inv().ok()?;
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..2 * n {
                    let d = &factor * &a[c][j];
                    a[i][j] = &a[i][j] - &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `φ_v = v - ½ Σ z*_α [z_α, v]` for `v ∈ g_f(0)`.
pub fn phi_v(ctx: &ReductionContext, v: &Elem) -> Result<DiffPoly, WError> {
    let alg = ctx.algebra();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let mut p = ctx.poly(v);
    for (z, zs) in md.z.iter().zip(&md.z_star) {
        let t = &ctx.poly(zs) * &ctx.poly(&alg.bracket(z, v));
        p.add_scaled(&t, &Scalar::from_q(q(-1, 2)));
    }
    Ok(ctx.reduce(&p))
}

/// `φ_w = w - Σ z*_α[z_α,w] + ⅓ ΣΣ z*_α z*_β [z_β,[z_α,w]] - Σ k(z_α|w) ∂z*_α` for `w ∈ g(-1/2)`.
pub fn phi_w(ctx: &ReductionContext, w: &Elem) -> Result<DiffPoly, WError> {
    let alg = ctx.algebra();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let mut p = ctx.poly(w);
    for (z, zs) in md.z.iter().zip(&md.z_star) {
        let t = &ctx.poly(zs) * &ctx.poly(&alg.bracket(z, w));
        p -= &t;
    }
    for (za, zsa) in md.z.iter().zip(&md.z_star) {
        for (zb, zsb) in md.z.iter().zip(&md.z_star) {
            let inner = alg.bracket(zb, &alg.bracket(za, w));
            let t = &(&ctx.poly(zsa) * &ctx.poly(zsb)) * &ctx.poly(&inner);
            p.add_scaled(&t, &Scalar::from_q(q(1, 3)));
        }
    }
    for (z, zs) in md.z.iter().zip(&md.z_star) {
        let c = ctx.level() * &Scalar::from_q(alg.form(z, w));
        p.add_scaled(&ctx.poly(zs).partial(), &-c);
    }
    Ok(ctx.reduce(&p))
}

/// `L_g = Σ (1/2k) u^α u_α + ∂x`.
pub fn sugawara(ctx: &ReductionContext) -> Result<DiffPoly, WError> {
    let alg = ctx.algebra();
    let dual = alg.dual_bases().map_err(|e| WError::NotMinimal(e.to_string()))?;
    let c = ctx.inverse_level(2)?;
    let mut l = ctx.poly(&alg.sl2().x).partial();
    for a in 0..alg.dim() {
        let t = &ctx.poly(&dual.upper[a]) * &ctx.poly(&alg.basis(a));
        l.add_scaled(&t, &c);
    }
    Ok(l)
}

/// `φ_f` normalized to leading term `f`: `[image of -k L_g] + (k/2) Σ (∂z*_α) z_α`.
/// The unnormalized `-L_g` version is invariant only at `k = 1`, see [`phi_f_literal`].
pub fn phi_f(ctx: &ReductionContext) -> Result<DiffPoly, WError> {
    phi_f_scaled(ctx, ctx.level().clone())
}

/// `[image of -L_g] + (k/2) Σ (∂z*_α) z_α`, taken literally.
pub fn phi_f_literal(ctx: &ReductionContext) -> Result<DiffPoly, WError> {
    phi_f_scaled(ctx, Scalar::one())
}

fn phi_f_scaled(ctx: &ReductionContext, scale: Scalar) -> Result<DiffPoly, WError> {
    let alg = ctx.algebra();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let mut p = ctx.reduce(&sugawara(ctx)?).scale(&-scale);
    let c = ctx.level() * &Scalar::from_q(q(1, 2));
    for (z, zs) in md.z.iter().zip(&md.z_star) {
        let t = &ctx.poly(zs).partial() * &ctx.poly(z);
        p.add_scaled(&t, &c);
    }
    Ok(ctx.reduce(&p))
}

/// Dual bases `{a_i}`, `{b_i}` of `g_f(0)`.
pub fn gf0_dual_pair(alg: &LieSuperalgebra) -> (Vec<Elem>, Vec<Elem>) {
    let a: Vec<Elem> = alg
        .g_f()
        .into_iter()
        .filter(|v| alg.grade_of(v) == Some(HalfInt::ZERO))
        .collect();
    let m = a.len();
    let mut gram = linalg::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = alg.form(&a[i], &a[j]);
        }
    }
    // b_j = Σ_l X_lj a_l with Gram·X = I
    let x = linalg::inverse(&gram).expect("form is nondegenerate on g_f(0)");
    let b = (0..m)
        .map(|j| {
            let mut v = alg.zero();
            for (l, al) in a.iter().enumerate() {
                v.add_scaled(al, &x[l][j]);
            }
            v
        })
        .collect();
    (a, b)
}

/// The closed-form generators `φ_v`, `φ_w`, `φ_f` for a minimal nilpotent.
pub fn minimal_generators(ctx: &ReductionContext) -> Result<GeneratorFamily, WError> {
    let alg = ctx.algebra();
    if !alg.is_minimal() {
        return Err(WError::NotMinimal(format!("{} with the given sl2-triple", alg.name())));
    }
    ctx.inverse_level(1)?;
    let (a, b) = gf0_dual_pair(alg);
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    let mut leading = Vec::new();
    for v in &a {
        labels.push(alg.label_for(v));
        elements.push(ctx.check(&phi_v(ctx, v)?));
        leading.push(v.clone());
    }
    for i in alg.grading_component(-HalfInt::HALF) {
        let w = alg.basis(i);
        labels.push(alg.label_for(&w));
        elements.push(ctx.check(&phi_w(ctx, &w)?));
        leading.push(w);
    }
    let f = alg.sl2().f.clone();
    labels.push(alg.label_for(&f));
    elements.push(ctx.check(&phi_f(ctx)?));
    leading.push(f);
    GeneratorFamily::new(ctx, labels, elements, leading, (a, b))
}

/// A family from explicit representatives whose leading vectors are read off.
pub fn family_from_polys(
    ctx: &ReductionContext,
    named: Vec<(String, DiffPoly)>,
) -> Result<GeneratorFamily, WError> {
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    let mut leading = Vec::new();
    for (l, p) in named {
        let lead = leading_vector(ctx, &p)
            .ok_or_else(|| WError::NotTriangular(format!("{} has no rational leading vector", l)))?;
        labels.push(l);
        elements.push(ctx.check(&p));
        leading.push(lead);
    }
    let pair = gf0_dual_pair(ctx.algebra());
    GeneratorFamily::new(ctx, labels, elements, leading, pair)
}

/// The relations of the minimal-nilpotent bracket table, checked against the engine.
pub fn check_minimal_table(ctx: &ReductionContext, fam: &GeneratorFamily) -> Result<CheckReport, WError> {
    let alg = ctx.algebra();
    let sp = ctx.space();
    let md = alg.minimal_data().ok_or_else(|| WError::NotMinimal("no z, z* bases".into()))?;
    let (a, b) = fam.dual_pair.clone();
    let ws: Vec<Elem> = alg.grading_component(-HalfInt::HALF).into_iter().map(|i| alg.basis(i)).collect();
    let k = ctx.level().clone();
    let pf = phi_f(ctx)?;
    let wel = |p: DiffPoly| WElement { poly: p, certified: true };
    let mut rep = CheckReport::new(format!("minimal generator relations for {}", alg.name()));
    let cmp = |rep: &mut CheckReport, name: &str, loc: String, got: LambdaPoly, want: LambdaPoly| {
        let d = &got - &want;
        rep.record(name, loc, (!d.is_zero()).then(|| format!("engine {} ; formula {}", got, want)));
    };
    let lam = |p: &DiffPoly, c: Q| -> LambdaPoly {
        // -(∂ + cλ) p
        let mut r = LambdaPoly::constant(p.partial().scale_q(&-Q::one()));
        r.add_coeff(1, &p.scale_q(&-c));
        r
    };
    let nm = |v: &Elem| alg.render(v);
    for v1 in &a {
        for v2 in &a {
            let got = ctx.w_bracket(&wel(phi_v(ctx, v1)?), &wel(phi_v(ctx, v2)?))?;
            let mut want = LambdaPoly::constant(phi_v(ctx, &alg.bracket(v1, v2))?);
            want.add_coeff(1, &DiffPoly::constant(sp, &k * &Scalar::from_q(alg.form(v1, v2))));
            cmp(&mut rep, "{phi_v1 λ phi_v2}", format!("({}, {})", nm(v1), nm(v2)), got, want);
        }
    }
    for v in &a {
        for w in &ws {
            let got = ctx.w_bracket(&wel(phi_v(ctx, v)?), &wel(phi_w(ctx, w)?))?;
            let want = LambdaPoly::constant(phi_w(ctx, &alg.bracket(v, w))?);
            cmp(&mut rep, "{phi_v λ phi_w}", format!("({}, {})", nm(v), nm(w)), got, want);
        }
    }
    for v in &a {
        let pv = phi_v(ctx, v)?;
        let got = ctx.w_bracket(&wel(pf.clone()), &wel(pv.clone()))?;
        cmp(&mut rep, "{phi_f λ phi_v}", nm(v), got, lam(&pv, Q::one()));
    }
    for w in &ws {
        let pw = phi_w(ctx, w)?;
        let got = ctx.w_bracket(&wel(pf.clone()), &wel(pw.clone()))?;
        cmp(&mut rep, "{phi_f λ phi_w}", nm(w), got, lam(&pw, q(3, 2)));
    }
    let got = ctx.w_bracket(&wel(pf.clone()), &wel(pf.clone()))?;
    cmp(&mut rep, "{phi_f λ phi_f}", "f".into(), got, lam(&pf, qi2()));

    let e = &alg.sl2().e;
    let half_k = ctx.inverse_level(2)?;
    for w1 in &ws {
        for w2 in &ws {
            let got = ctx.w_bracket(&wel(phi_w(ctx, w1)?), &wel(phi_w(ctx, w2)?))?;
            let mut c0 = pf.clone();
            for (ai, bi) in a.iter().zip(&b) {
                c0.add_scaled(&(&phi_v(ctx, ai)? * &phi_v(ctx, bi)?), &half_k);
            }
            let mut c0 = c0.scale_q(&alg.form(e, &alg.bracket(w1, w2)));
            let p1 = alg.parity_of_elem(w1).unwrap_or_default();
            let p2 = alg.parity_of_elem(w2).unwrap_or_default();
            let sign = Scalar::from_int(p1.koszul(p2));
            for (z, zs) in md.z.iter().zip(&md.z_star) {
                let l = alg.sharp(&alg.bracket(w2, zs));
                let r = alg.sharp(&alg.bracket(z, w1));
                c0.add_scaled(&(&phi_v(ctx, &l)? * &phi_v(ctx, &r)?), &sign);
            }
            let mut want = LambdaPoly::constant(c0);
            let mut c2 = DiffPoly::zero(sp);
            for (za, zsa) in md.z.iter().zip(&md.z_star) {
                for (zb, zsb) in md.z.iter().zip(&md.z_star) {
                    let coef = &(&k * &k) * &Scalar::from_q(alg.form(za, w1) * alg.form(zb, w2));
                    let br = ctx.reduce(&ctx.poly(&alg.bracket(zsa, zsb)));
                    c2.add_scaled(&br, &-coef);
                }
            }
            want.add_coeff(2, &c2);
            cmp(&mut rep, "{phi_w1 λ phi_w2}", format!("({}, {})", nm(w1), nm(w2)), got, want);
        }
    }
    Ok(rep)
}

fn qi2() -> Q {
    Q::from_integer(2.into())
}

/// Reduced monomials of conformal weight `delta` and parity `parity`.
pub fn weight_basis(ctx: &ReductionContext, delta: HalfInt, parity: Parity) -> Vec<Monomial> {
    let alg = ctx.algebra();
    let mut syms: Vec<(DiffSymbol, HalfInt)> = Vec::new();
    for a in 0..alg.dim() {
        if !ctx.is_reduced_symbol(a) {
            continue;
        }
        let w = ctx.weights()[a];
        let mut o = 0;
        while w + HalfInt::from_int(o as i32) <= delta {
            syms.push((alg.space().symbol(a, o), w + HalfInt::from_int(o as i32)));
            o += 1;
        }
    }
    syms.sort();
    let mut out = Vec::new();
    fn rec(
        syms: &[(DiffSymbol, HalfInt)],
        start: usize,
        left: HalfInt,
        cur: &mut Vec<DiffSymbol>,
        out: &mut Vec<Vec<DiffSymbol>>,
    ) {
        if left == HalfInt::ZERO {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..syms.len() {
            let (s, w) = syms[i];
            if w > left {
                continue;
            }
            // odd symbols square to zero
            let next = if s.odd { i + 1 } else { i };
            cur.push(s);
            rec(syms, next, left - w, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&syms, 0, delta, &mut Vec::new(), &mut raw);
    for m in raw {
        if let Some((_, mono)) = Monomial::from_unsorted(m) {
            if mono.parity() == parity {
                out.push(mono);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Solves for W-elements with prescribed leading vector, one per `g^f` basis vector
/// of weight at most `bound`. Requires a rational level. Among solutions the one
/// with all free RREF variables zero is returned.
pub fn find_generators(
    ctx: &ReductionContext,
    bound: HalfInt,
) -> Result<Vec<(String, WElement)>, WError> {
    if ctx.level().constant_value().is_none() {
        return Err(WError::Level("a rational number for the generator search".into()));
    }
    let alg = ctx.algebra();
    let gf = alg.g_f();
    let n = alg.dim();
    let gf_mat: linalg::Matrix = (0..n)
        .map(|i| gf.iter().map(|v| v.coord(i).clone()).collect())
        .collect();
    let pf_coords: Vec<Vec<Q>> = (0..n)
        .map(|a| linalg::solve(&gf_mat, alg.project_f(&alg.basis(a)).coords()).expect("g^f basis"))
        .collect();
    let mut out = Vec::new();
    for (vi, v) in gf.iter().enumerate() {
        let j = alg.grade_of(v).expect("homogeneous g^f basis");
        let delta = HalfInt::ONE - j;
        if delta > bound {
            continue;
        }
        let parity = alg.parity_of_elem(v).expect("homogeneous");
        let basis = weight_basis(ctx, delta, parity);
        let cols = basis.len();
        let mut rows: BTreeMap<(usize, u32, Monomial), Vec<Q>> = BTreeMap::new();
        for (c, m) in basis.iter().enumerate() {
            let p = DiffPoly::from_term(ctx.space(), m.clone(), Scalar::one());
            for &nb in ctx.nilpotent() {
                let r = ctx.ad_lambda(&alg.basis(nb), &p);
                for (deg, coeff) in r.coeffs() {
                    for (mono, s) in coeff.terms() {
                        let val = s
                            .constant_value()
                            .ok_or_else(|| WError::Level("rational".into()))?;
                        rows.entry((nb, deg, mono.clone()))
                            .or_insert_with(|| vec![Q::zero(); cols])[c] += val;
                    }
                }
            }
        }
        let mut a_mat: linalg::Matrix = rows.into_values().collect();
        let mut rhs = vec![Q::zero(); a_mat.len()];
        for (ui, u) in gf.iter().enumerate() {
            if alg.grade_of(u) != Some(j) {
                continue;
            }
            let mut row = vec![Q::zero(); cols];
            for (c, m) in basis.iter().enumerate() {
                if let [s] = m.symbols() {
                    if s.order == 0 {
                        row[c] = pf_coords[s.gen()][ui].clone();
                    }
                }
            }
            a_mat.push(row);
            rhs.push(if ui == vi { Q::one() } else { Q::zero() });
        }
        let sol = linalg::solve(&a_mat, &rhs)
            .ok_or_else(|| WError::NoSolution(format!("leading vector {}", alg.render(v))))?;
        let mut p = DiffPoly::zero(ctx.space());
        for (c, m) in sol.iter().zip(&basis) {
            if !c.is_zero() {
                p.add_term(m.clone(), Scalar::from_q(c.clone()));
            }
        }
        let w = ctx.check(&p);
        if !w.certified {
            return Err(WError::NoSolution(format!("solution for {} fails invariance", alg.render(v))));
        }
        out.push((alg.label_for(v), w));
    }
    Ok(out)
}

/// Checks that each candidate equals the reference generator with the same label
/// up to a polynomial in the other generators, and returns the normalized candidates.
pub fn triangular_normalize(
    ctx: &ReductionContext,
    reference: &GeneratorFamily,
    candidates: &[(String, WElement)],
) -> Result<Vec<(String, DiffPoly)>, WError> {
    let mut out = Vec::new();
    for (label, w) in candidates {
        let i = reference
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| WError::NotInSpan(label.clone()))?;
        let expr = reference.express(ctx, w.representative())?;
        let li = DiffPoly::var(reference.label_space(), i);
        let rest = &expr - &li;
        if rest.symbols().iter().any(|s| s.gen() == i) {
            return Err(WError::NotTriangular(format!("{} = {}", label, expr)));
        }
        let normalized = w.representative() - &reference.evaluate(&rest);
        out.push((label.clone(), normalized));
    }
    Ok(out)
}

/// Conformal weight of a reduced polynomial, `None` if inhomogeneous.
pub fn conformal_weight(ctx: &ReductionContext, p: &DiffPoly) -> Option<HalfInt> {
    lambda::conformal_weight(ctx.weights(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::builtin;
    use crate::text;

    fn ctx(name: &str, k: Scalar) -> ReductionContext {
        ReductionContext::new(&builtin(name).unwrap(), &k)
    }

    #[test]
    fn reduce_matches_ideal_values() {
        let c = ctx("spo(2|1)", Scalar::one());
        let sp = c.space().clone();
        let e = DiffPoly::named(&sp, "e_ev").unwrap();
        assert_eq!(c.reduce(&e), DiffPoly::constant(&sp, Scalar::from_int(-1)));
        assert!(c.reduce(&e.partial()).is_zero());
        let c = ctx("spo(2|3)", Scalar::one());
        let sp = c.space().clone();
        let e22 = DiffPoly::named(&sp, "E22").unwrap();
        assert_eq!(c.reduce(&e22), DiffPoly::constant(&sp, Scalar::from_q(q(-4, 3))));
        let e21 = DiffPoly::named(&sp, "E21").unwrap();
        assert_eq!(c.reduce(&e21), DiffPoly::constant(&sp, Scalar::from_q(q(1, 3))));
    }

    #[test]
    fn raw_f_is_not_invariant() {
        let c = ctx("spo(2|1)", Scalar::one());
        let f = DiffPoly::named(c.space(), "f_ev").unwrap();
        let m = c.is_w_element(&f);
        assert!(!m.holds);
        assert!(m.witness.is_some());
    }

    #[test]
    fn spo21_example_generators_are_invariant() {
        let c = ctx("spo(2|1)", Scalar::one());
        let od = text::parse_diffpoly(c.space(), "f_od - 1/2 e_od h - ∂(e_od)").unwrap();
        let ev = text::parse_diffpoly(
            c.space(),
            "f_ev + 1/2 f_od e_od - 1/4 h^2 + 1/4 e_od ∂(e_od) - 1/2 ∂(h)",
        )
        .unwrap();
        assert!(c.is_w_element(&od).holds);
        assert!(c.is_w_element(&ev).holds);
    }
}
