//! λ-brackets on `S(C[∂] ⊗ W)`.
//!
//! A [`LambdaBracket`] stores `{a λ b}` for pairs of generators and extends it
//! to arbitrary differential polynomials by sesquilinearity, the left Leibniz
//! rule, and skewsymmetry (which supplies the right Leibniz rule).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{AddAssign, SubAssign};
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::diffpoly::{DiffPoly, DiffSymbol, GeneratorSpace, Monomial, Parity};
use crate::report::CheckReport;
use crate::scalar::{Scalar, Q};
use crate::weight::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("operands live in different generator spaces ({0} and {1})")]
    MixedSpaces(String, String),
    #[error("{0} has no definite parity")]
    Inhomogeneous(String),
    #[error("entry {{{0} λ {0}}} is not compatible with skewsymmetry")]
    SelfSkew(String),
}

/// `n!/(i!(n-i)!)` as a rational.
pub(crate) fn binom(n: u32, i: u32) -> Q {
    let mut acc = Q::one();
    for j in 0..i {
        acc = acc * Q::from_integer((n - j).into()) / Q::from_integer((j + 1).into());
    }
    acc
}

/// `Σ λⁿ cₙ` with coefficients in a fixed generator space.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaPoly {
    space: Arc<GeneratorSpace>,
    coeffs: BTreeMap<u32, DiffPoly>,
}

impl LambdaPoly {
    pub fn zero(space: &Arc<GeneratorSpace>) -> Self {
        LambdaPoly {
            space: space.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    /// The λ-free polynomial `p`.
    pub fn constant(p: DiffPoly) -> Self {
        let mut r = LambdaPoly::zero(p.space());
        r.add_coeff(0, &p);
        r
    }

    pub fn constant_scalar(space: &Arc<GeneratorSpace>, c: Scalar) -> Self {
        LambdaPoly::constant(DiffPoly::constant(space, c))
    }

    /// `c λⁿ`
    pub fn lambda_pow(space: &Arc<GeneratorSpace>, n: u32, c: Scalar) -> Self {
        LambdaPoly::from_coeff(n, DiffPoly::constant(space, c))
    }

    pub fn from_coeff(n: u32, p: DiffPoly) -> Self {
        let mut r = LambdaPoly::zero(p.space());
        r.add_coeff(n, &p);
        r
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, n: u32) -> DiffPoly {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| DiffPoly::zero(&self.space))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &DiffPoly)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Value at `λ = 0`.
    pub fn at_zero(&self) -> DiffPoly {
        self.coeff(0)
    }

    /// `Some(c)` when the polynomial is a constant scalar.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.degree() {
            None => Some(Scalar::zero()),
            Some(0) => self.coeff(0).as_constant(),
            _ => None,
        }
    }

    pub fn add_coeff(&mut self, n: u32, p: &DiffPoly) {
        assert!(p.same_space(&DiffPoly::zero(&self.space)), "mixed generator spaces");
        if p.is_zero() {
            return;
        }
        let slot = self
            .coeffs
            .entry(n)
            .or_insert_with(|| DiffPoly::zero(&self.space));
        *slot += p;
        if slot.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add_scaled(&mut self, other: &LambdaPoly, c: &Scalar) {
        for (n, p) in &other.coeffs {
            self.add_coeff(*n, &p.scale(c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> LambdaPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn neg(&self) -> LambdaPoly {
        self.scale(&Scalar::from_int(-1))
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, mut f: impl FnMut(&DiffPoly) -> DiffPoly) -> LambdaPoly {
        let mut r = LambdaPoly::zero(&self.space);
        for (n, p) in &self.coeffs {
            r.add_coeff(*n, &f(p));
        }
        r
    }

    /// Same as [`LambdaPoly::map_coeffs`] but the images may live in another space.
    pub fn map_into(
        &self,
        target: &Arc<GeneratorSpace>,
        mut f: impl FnMut(&DiffPoly) -> DiffPoly,
    ) -> LambdaPoly {
        let mut r = LambdaPoly::zero(target);
        for (n, p) in &self.coeffs {
            r.add_coeff(*n, &f(p));
        }
        r
    }

    /// Product of two λ-polynomials.
    pub fn mul(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut r = LambdaPoly::zero(&self.space);
        for (m, a) in &self.coeffs {
            for (n, b) in &other.coeffs {
                r.add_coeff(m + n, &(a * b));
            }
        }
        r
    }

    /// Multiplies every coefficient by `p` on the right.
    pub fn mul_right(&self, p: &DiffPoly) -> LambdaPoly {
        self.map_coeffs(|c| c * p)
    }

    /// Multiplies every coefficient by `p` on the left.
    pub fn mul_left(&self, p: &DiffPoly) -> LambdaPoly {
        self.map_coeffs(|c| p * c)
    }

    /// `(-λ)^m · self`
    pub fn mul_neg_lambda_pow(&self, m: u32) -> LambdaPoly {
        if m == 0 {
            return self.clone();
        }
        let sign = Scalar::from_int(if m % 2 == 0 { 1 } else { -1 });
        let mut r = LambdaPoly::zero(&self.space);
        for (n, p) in &self.coeffs {
            r.coeffs.insert(n + m, p.scale(&sign));
        }
        r
    }

    /// `(λ + ∂)^m · self`, with `∂` acting on the coefficients.
    pub fn lambda_plus_partial_pow(&self, m: u32) -> LambdaPoly {
        if m == 0 {
            return self.clone();
        }
        let mut r = LambdaPoly::zero(&self.space);
        for (n, p) in &self.coeffs {
            let mut d = p.clone();
            for i in 0..=m {
                if i > 0 {
                    d = d.partial();
                }
                if d.is_zero() {
                    break;
                }
                r.add_coeff(n + m - i, &d.scale_q(&binom(m, i)));
            }
        }
        r
    }

    /// `Σ (-λ-∂)ⁿ cₙ`: the substitution `λ ↦ -λ-∂` used by skewsymmetry.
    pub fn flip(&self) -> LambdaPoly {
        let mut r = LambdaPoly::zero(&self.space);
        for (n, p) in &self.coeffs {
            let mut d = p.clone();
            let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
            for i in 0..=*n {
                if i > 0 {
                    d = d.partial();
                }
                if d.is_zero() {
                    break;
                }
                r.add_coeff(n - i, &d.scale_q(&(binom(*n, i) * &sign)));
            }
        }
        r
    }

    /// `(λ + ∂)`-substitution applied to a right factor:
    /// `Σ cₙ (λ+∂)ⁿ z` with `∂` acting on `z` only.
    pub fn arrow_apply(&self, z: &DiffPoly) -> LambdaPoly {
        let mut r = LambdaPoly::zero(&self.space);
        for (n, c) in &self.coeffs {
            let mut d = z.clone();
            for i in 0..=*n {
                if i > 0 {
                    d = d.partial();
                }
                if d.is_zero() {
                    break;
                }
                r.add_coeff(n - i, &(c * &d).scale_q(&binom(*n, i)));
            }
        }
        r
    }

    /// Evaluates `k` in every coefficient.
    pub fn specialize_k(&self, k: &Q) -> Result<LambdaPoly, crate::scalar::ScalarError> {
        let mut r = LambdaPoly::zero(&self.space);
        for (n, p) in &self.coeffs {
            r.add_coeff(*n, &p.specialize_k(k)?);
        }
        Ok(r)
    }
}

impl AddAssign<&LambdaPoly> for LambdaPoly {
    fn add_assign(&mut self, o: &LambdaPoly) {
        for (n, p) in &o.coeffs {
            self.add_coeff(*n, p);
        }
    }
}

impl SubAssign<&LambdaPoly> for LambdaPoly {
    fn sub_assign(&mut self, o: &LambdaPoly) {
        for (n, p) in &o.coeffs {
            self.add_coeff(*n, &-p);
        }
    }
}

impl std::ops::Sub<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn sub(self, o: &LambdaPoly) -> LambdaPoly {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl std::ops::Add<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, o: &LambdaPoly) -> LambdaPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render_lambdapoly(self))
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaPoly({})", self)
    }
}

/// Polynomial in two commuting variables `λ, μ`; only Jacobi needs it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMuPoly {
    space: Arc<GeneratorSpace>,
    coeffs: BTreeMap<(u32, u32), DiffPoly>,
}

impl LambdaMuPoly {
    pub fn zero(space: &Arc<GeneratorSpace>) -> Self {
        LambdaMuPoly {
            space: space.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_coeff(&mut self, lm: (u32, u32), p: &DiffPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self
            .coeffs
            .entry(lm)
            .or_insert_with(|| DiffPoly::zero(&self.space));
        *slot += p;
        if slot.is_zero() {
            self.coeffs.remove(&lm);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(u32, u32), &DiffPoly)> {
        self.coeffs.iter()
    }
}

impl fmt::Display for LambdaMuPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|((l, m), p)| format!("λ^{}μ^{}·({})", l, m, p))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A λ-bracket on `S(C[∂] ⊗ W)` determined by its values on generators.
#[derive(Clone)]
pub struct LambdaBracket {
    space: Arc<GeneratorSpace>,
    table: Vec<Vec<LambdaPoly>>,
}

impl LambdaBracket {
    /// The zero bracket.
    pub fn new(space: &Arc<GeneratorSpace>) -> Self {
        let n = space.len();
        LambdaBracket {
            space: space.clone(),
            table: vec![vec![LambdaPoly::zero(space); n]; n],
        }
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    /// Sets `{a λ b}` and fills `{b λ a}` by skewsymmetry.
    pub fn define(&mut self, a: usize, b: usize, value: LambdaPoly) -> Result<(), LambdaError> {
        let pa = self.space.parity(a);
        let pb = self.space.parity(b);
        let mirror = value.flip().scale(&Scalar::from_int(-pa.koszul(pb)));
        if a == b && mirror != value {
            return Err(LambdaError::SelfSkew(self.space.name(a).to_string()));
        }
        self.table[a][b] = value;
        self.table[b][a] = mirror;
        Ok(())
    }

    /// Overwrites a single orientation without touching its mirror.
    pub fn set_entry(&mut self, a: usize, b: usize, value: LambdaPoly) {
        self.table[a][b] = value;
    }

    pub fn entry(&self, a: usize, b: usize) -> &LambdaPoly {
        &self.table[a][b]
    }

    /// `{A λ B}`
    pub fn bracket(&self, a: &DiffPoly, b: &DiffPoly) -> Result<LambdaPoly, LambdaError> {
        Ok(self.bracket_many(a, &[b])?.pop().expect("one result"))
    }

    /// `{A λ B}` for several `B`, sharing the brackets of `A` with symbols.
    pub fn bracket_many(&self, a: &DiffPoly, bs: &[&DiffPoly]) -> Result<Vec<LambdaPoly>, LambdaError> {
        for p in std::iter::once(a).chain(bs.iter().copied()) {
            if p.space().id() != self.space.id() {
                return Err(LambdaError::MixedSpaces(
                    self.space.label().to_string(),
                    p.space().label().to_string(),
                ));
            }
        }
        let mut parts: BTreeMap<Parity, DiffPoly> = BTreeMap::new();
        for (ma, ca) in a.terms() {
            if !ma.is_one() {
                parts
                    .entry(ma.parity())
                    .or_insert_with(|| DiffPoly::zero(&self.space))
                    .add_term(ma.clone(), ca.clone());
            }
        }
        let mut outs = vec![LambdaPoly::zero(&self.space); bs.len()];
        for (pa, part) in &parts {
            let mut cache: HashMap<DiffSymbol, LambdaPoly> = HashMap::new();
            for (b, out) in bs.iter().zip(outs.iter_mut()) {
                for (mb, cb) in b.terms() {
                    let syms = mb.symbols();
                    let mut prefix_parity = Parity::Even;
                    for j in 0..syms.len() {
                        let inner = cache
                            .entry(syms[j])
                            .or_insert_with(|| self.bracket_poly_symbol(part, *pa, syms[j]));
                        if !inner.is_zero() {
                            let prefix = Monomial::from_sorted_unchecked(syms[..j].to_vec());
                            let suffix = Monomial::from_sorted_unchecked(syms[j + 1..].to_vec());
                            let sign = cb * &Scalar::from_int(pa.koszul(prefix_parity));
                            let term = inner.map_coeffs(|c| c.monomial_mul(&prefix).mul_monomial(&suffix));
                            out.add_scaled(&term, &sign);
                        }
                        prefix_parity = prefix_parity + syms[j].parity();
                    }
                }
            }
        }
        Ok(outs)
    }

    /// `{A λ t}` for a homogeneous `A` of parity `pa` without constant term.
    fn bracket_poly_symbol(&self, a: &DiffPoly, pa: Parity, t: DiffSymbol) -> LambdaPoly {
        let mut direct = LambdaPoly::zero(&self.space);
        // {A λ t} = -(-1)^{p(A)p(t)} {t_{-λ-∂} A}, flipped once for all products
        let mut mirrored = LambdaPoly::zero(&self.space);
        let ts = Monomial::from_symbol(t);
        for (m, c) in a.terms() {
            if m.len() == 1 {
                direct.add_scaled(&self.bracket_symbols(m.symbols()[0], t), c);
            } else {
                mirrored.add_scaled(&self.bracket_monomials(&ts, m), c);
            }
        }
        if !mirrored.is_zero() {
            let sign = Scalar::from_int(-pa.koszul(t.parity()));
            direct.add_scaled(&mirrored.flip(), &sign);
        }
        direct
    }

    /// Panicking form of [`LambdaBracket::bracket`] for callers that built
    /// both arguments over this bracket's space.
    pub fn br(&self, a: &DiffPoly, b: &DiffPoly) -> LambdaPoly {
        self.bracket(a, b).expect("bracket arguments in the bracket's space")
    }

    /// `{A λ B}` at `λ = 0`.
    pub fn bracket0(&self, a: &DiffPoly, b: &DiffPoly) -> DiffPoly {
        self.br(a, b).at_zero()
    }

    /// `{∂ᵐa λ ∂ⁿb} = (-λ)ᵐ (λ+∂)ⁿ {a λ b}`
    pub fn bracket_symbols(&self, s: DiffSymbol, t: DiffSymbol) -> LambdaPoly {
        let base = &self.table[s.gen()][t.gen()];
        if base.is_zero() {
            return LambdaPoly::zero(&self.space);
        }
        base.lambda_plus_partial_pow(t.order)
            .mul_neg_lambda_pow(s.order)
    }

    fn bracket_monomials(&self, a: &Monomial, b: &Monomial) -> LambdaPoly {
        let mut out = LambdaPoly::zero(&self.space);
        if a.is_one() || b.is_one() {
            return out;
        }
        let pa = a.parity();
        let syms = b.symbols();
        let mut prefix_parity = Parity::Even;
        for j in 0..syms.len() {
            let inner = self.bracket_monomial_symbol(a, syms[j]);
            if !inner.is_zero() {
                let prefix = Monomial::from_sorted_unchecked(syms[..j].to_vec());
                let suffix = Monomial::from_sorted_unchecked(syms[j + 1..].to_vec());
                let sign = Scalar::from_int(pa.koszul(prefix_parity));
                let term = inner.map_coeffs(|c| c.monomial_mul(&prefix).mul_monomial(&suffix));
                out.add_scaled(&term, &sign);
            }
            prefix_parity = prefix_parity + syms[j].parity();
        }
        out
    }

    fn bracket_monomial_symbol(&self, a: &Monomial, t: DiffSymbol) -> LambdaPoly {
        if a.len() == 1 {
            return self.bracket_symbols(a.symbols()[0], t);
        }
        // {A λ t} = -(-1)^{p(A)p(t)} {t_{-λ-∂} A}
        let x = self.bracket_monomials(&Monomial::from_symbol(t), a);
        let sign = -a.parity().koszul(t.parity());
        x.flip().scale(&Scalar::from_int(sign))
    }

    /// `{A λ B} + (-1)^{p(A)p(B)} {B_{-λ-∂} A}`
    pub fn skew_residual(&self, a: &DiffPoly, b: &DiffPoly) -> Result<LambdaPoly, LambdaError> {
        let pa = parity_of(a)?;
        let pb = parity_of(b)?;
        let lhs = self.bracket(a, b)?;
        let rhs = self.bracket(b, a)?.flip();
        let mut r = lhs;
        r.add_scaled(&rhs, &Scalar::from_int(pa.koszul(pb)));
        Ok(r)
    }

    /// `{A λ {B μ C}} - (-1)^{p(A)p(B)} {B μ {A λ C}} - {{A λ B}_{λ+μ} C}`
    pub fn jacobi_residual(
        &self,
        a: &DiffPoly,
        b: &DiffPoly,
        c: &DiffPoly,
    ) -> Result<LambdaMuPoly, LambdaError> {
        let pa = parity_of(a)?;
        let pb = parity_of(b)?;
        let mut r = LambdaMuPoly::zero(&self.space);
        let bc = self.bracket(b, c)?;
        let cs: Vec<&DiffPoly> = bc.coeffs().map(|(_, p)| p).collect();
        for ((n, _), v) in bc.coeffs().zip(self.bracket_many(a, &cs)?) {
            for (m, d) in v.coeffs() {
                r.add_coeff((m, n), d);
            }
        }
        let sign = Scalar::from_int(-pa.koszul(pb));
        let ac = self.bracket(a, c)?;
        let es: Vec<&DiffPoly> = ac.coeffs().map(|(_, p)| p).collect();
        for ((m, _), v) in ac.coeffs().zip(self.bracket_many(b, &es)?) {
            for (n, d) in v.coeffs() {
                r.add_coeff((m, n), &d.scale(&sign));
            }
        }
        for (m, gm) in self.bracket(a, b)?.coeffs() {
            for (j, h) in self.br(gm, c).coeffs() {
                for i in 0..=j {
                    r.add_coeff((m + i, j - i), &h.scale_q(&-binom(j, i)));
                }
            }
        }
        Ok(r)
    }

    /// Skewsymmetry on the given pairs; failing pairs carry the residual.
    pub fn check_skewsymmetry(&self, samples: &[(DiffPoly, DiffPoly)]) -> CheckReport {
        let mut rep = CheckReport::new("skewsymmetry");
        for (i, (a, b)) in samples.iter().enumerate() {
            let loc = format!("pair {} ({} ; {})", i, short(a), short(b));
            match self.skew_residual(a, b) {
                Ok(r) if r.is_zero() => rep.pass("skewsymmetry", loc),
                Ok(r) => rep.fail("skewsymmetry", loc, r.to_string()),
                Err(e) => rep.fail("skewsymmetry", loc, e.to_string()),
            }
        }
        rep
    }

    /// Jacobi identity on the given triples as an exact two-variable identity.
    pub fn check_jacobi(&self, samples: &[(DiffPoly, DiffPoly, DiffPoly)]) -> CheckReport {
        let mut rep = CheckReport::new("jacobi");
        for (i, (a, b, c)) in samples.iter().enumerate() {
            let loc = format!("triple {} ({} ; {} ; {})", i, short(a), short(b), short(c));
            match self.jacobi_residual(a, b, c) {
                Ok(r) if r.is_zero() => rep.pass("jacobi", loc),
                Ok(r) => rep.fail("jacobi", loc, r.to_string()),
                Err(e) => rep.fail("jacobi", loc, e.to_string()),
            }
        }
        rep
    }

    /// Skewsymmetry and Jacobi on all generator pairs and triples.
    pub fn check_generators(&self) -> CheckReport {
        let n = self.space.len();
        let gens: Vec<DiffPoly> = (0..n).map(|i| DiffPoly::var(&self.space, i)).collect();
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        for a in &gens {
            for b in &gens {
                pairs.push((a.clone(), b.clone()));
                for c in &gens {
                    triples.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
        let mut rep = self.check_skewsymmetry(&pairs);
        rep.extend(self.check_jacobi(&triples));
        rep.title = "generator axioms".into();
        rep
    }
}

fn short(p: &DiffPoly) -> String {
    let s = p.to_string();
    if s.chars().count() > 60 {
        let cut: String = s.chars().take(57).collect();
        format!("{}...", cut)
    } else {
        s
    }
}

pub(crate) fn parity_of(p: &DiffPoly) -> Result<Parity, LambdaError> {
    p.parity()
        .ok_or_else(|| LambdaError::Inhomogeneous(p.to_string()))
}

/// Common conformal weight of all monomials of `p`, given weights of the
/// generators; `∂` adds one. `None` when the monomials disagree. The zero
/// polynomial and constants have weight zero.
pub fn conformal_weight(weights: &[HalfInt], p: &DiffPoly) -> Option<HalfInt> {
    let mut out: Option<HalfInt> = None;
    for (m, _) in p.terms() {
        let w = monomial_weight(weights, m);
        match out {
            None => out = Some(w),
            Some(o) if o != w => return None,
            _ => {}
        }
    }
    Some(out.unwrap_or(HalfInt::ZERO))
}

pub fn monomial_weight(weights: &[HalfInt], m: &Monomial) -> HalfInt {
    m.symbols().iter().fold(HalfInt::ZERO, |acc, s| {
        acc + weights[s.gen()] + HalfInt::from_int(s.order as i32)
    })
}

/// Splits `p` into its conformal-weight components.
pub fn split_by_weight(weights: &[HalfInt], p: &DiffPoly) -> BTreeMap<HalfInt, DiffPoly> {
    let mut out: BTreeMap<HalfInt, DiffPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let w = monomial_weight(weights, m);
        out.entry(w)
            .or_insert_with(|| DiffPoly::zero(p.space()))
            .add_term(m.clone(), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_diffpoly;

    fn heisenberg() -> (Arc<GeneratorSpace>, LambdaBracket) {
        let s = GeneratorSpace::new(
            "heis",
            [("a", Parity::Even), ("psi", Parity::Odd), ("chi", Parity::Odd)],
        )
        .unwrap();
        let mut br = LambdaBracket::new(&s);
        br.define(0, 0, LambdaPoly::lambda_pow(&s, 1, Scalar::k())).unwrap();
        br.define(1, 2, LambdaPoly::constant_scalar(&s, Scalar::one())).unwrap();
        (s, br)
    }

    #[test]
    fn sesquilinearity_on_generators() {
        let (s, br) = heisenberg();
        let a = DiffPoly::var(&s, 0);
        let v = br.br(&a.partial(), &a);
        assert_eq!(v, LambdaPoly::lambda_pow(&s, 2, -Scalar::k()));
        let w = br.br(&a, &a.partial());
        assert_eq!(w, LambdaPoly::lambda_pow(&s, 2, Scalar::k()));
    }

    #[test]
    fn odd_pair_mirror() {
        let (s, br) = heisenberg();
        // {chi λ psi} = -(-1)^{1} {psi λ chi} = 1
        assert_eq!(br.entry(2, 1), &LambdaPoly::constant_scalar(&s, Scalar::one()));
    }

    #[test]
    fn unit_brackets_vanish() {
        let (s, br) = heisenberg();
        let a = parse_diffpoly(&s, "a*psi + ∂(chi)").unwrap();
        let one = DiffPoly::one(&s);
        assert!(br.br(&a, &one).is_zero());
        assert!(br.br(&one, &a).is_zero());
    }

    #[test]
    fn composite_arguments_satisfy_axioms() {
        let (s, br) = heisenberg();
        let x = parse_diffpoly(&s, "a*a*psi + ∂(a)*chi").unwrap();
        let y = parse_diffpoly(&s, "psi*chi*a + 2 ∂^2(a)").unwrap();
        let z = parse_diffpoly(&s, "chi*∂(psi) - a").unwrap();
        assert!(br.skew_residual(&x, &y).unwrap().is_zero());
        assert!(br.jacobi_residual(&x, &y, &z).unwrap().is_zero());
    }

    #[test]
    fn flip_is_an_involution() {
        let (s, _) = heisenberg();
        let p = parse_diffpoly(&s, "a*∂(a)").unwrap();
        let l = LambdaPoly::from_coeff(2, p.clone());
        let mut m = l.clone();
        m.add_coeff(1, &p.partial());
        assert_eq!(m.flip().flip(), m);
    }
}
