//! Free differential supersymmetric polynomial algebras `S(C[∂] ⊗ W)`.
//!
//! Elements are kept in a canonical form: each monomial is a sorted list of
//! symbols `∂ⁿa`, odd symbols occur at most once, and the Koszul sign picked
//! up while sorting is folded into the coefficient.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffPolyError {
    #[error("operands live in different generator spaces ({0} and {1})")]
    MixedSpaces(String, String),
    #[error("substitution for {symbol} changes parity")]
    ParityMismatch { symbol: String },
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u8) -> Parity {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }

    /// `(-1)^{self·other}`
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, o: Parity) -> Parity {
        Parity::from_bit(self.bit() + o.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

/// Words that cannot be used as generator names because the text grammar reserves them.
pub const RESERVED_NAMES: [&str; 2] = ["k", "λ"];

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !(first.is_alphabetic() && first != 'λ' && first != '∂') {
        return false;
    }
    if RESERVED_NAMES.contains(&name) {
        return false;
    }
    chars.all(|c| c.is_alphanumeric() && c != 'λ' || c == '_' || c == '@')
}

/// A finite set of named generators with parities.
#[derive(Debug)]
pub struct GeneratorSpace {
    id: u64,
    label: String,
    names: Vec<String>,
    parities: Vec<Parity>,
    index: HashMap<String, usize>,
}

impl PartialEq for GeneratorSpace {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for GeneratorSpace {}

impl GeneratorSpace {
    pub fn new<S: Into<String>>(
        label: impl Into<String>,
        gens: impl IntoIterator<Item = (S, Parity)>,
    ) -> Result<Arc<Self>, DiffPolyError> {
        let mut names = Vec::new();
        let mut parities = Vec::new();
        let mut index = HashMap::new();
        for (name, p) in gens {
            let name: String = name.into();
            if !is_valid_name(&name) {
                return Err(DiffPolyError::InvalidName(name));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(DiffPolyError::DuplicateName(name));
            }
            names.push(name);
            parities.push(p);
        }
        Ok(Arc::new(GeneratorSpace {
            id: NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed),
            label: label.into(),
            names,
            parities,
            index,
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parity(&self, gen: usize) -> Parity {
        self.parities[gen]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn symbol(&self, gen: usize, order: u32) -> DiffSymbol {
        DiffSymbol {
            gen: gen as u32,
            order,
            odd: self.parities[gen].is_odd(),
        }
    }
}

/// The symbol `∂^order(gen)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffSymbol {
    pub gen: u32,
    pub order: u32,
    pub odd: bool,
}

impl DiffSymbol {
    pub fn parity(&self) -> Parity {
        if self.odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn gen(&self) -> usize {
        self.gen as usize
    }

    pub fn derive(&self, n: u32) -> DiffSymbol {
        DiffSymbol {
            order: self.order + n,
            ..*self
        }
    }
}

/// A sorted product of symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<DiffSymbol>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_symbol(s: DiffSymbol) -> Self {
        Monomial(vec![s])
    }

    /// Sorts `syms` into canonical order. Returns the sign as `true` for `-1`,
    /// or `None` when an odd symbol repeats.
    pub fn from_unsorted(mut syms: Vec<DiffSymbol>) -> Option<(bool, Monomial)> {
        let mut neg = false;
        for i in 1..syms.len() {
            let mut j = i;
            while j > 0 && syms[j - 1] > syms[j] {
                if syms[j - 1].odd && syms[j].odd {
                    neg = !neg;
                }
                syms.swap(j - 1, j);
                j -= 1;
            }
        }
        if syms.windows(2).any(|w| w[0] == w[1] && w[0].odd) {
            return None;
        }
        Some((neg, Monomial(syms)))
    }

    /// Builds a monomial from symbols already in canonical order.
    pub(crate) fn from_sorted_unchecked(syms: Vec<DiffSymbol>) -> Self {
        debug_assert!(syms.windows(2).all(|w| w[0] <= w[1] && !(w[0] == w[1] && w[0].odd)));
        Monomial(syms)
    }

    pub fn symbols(&self) -> &[DiffSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.0.iter().filter(|s| s.odd).count() as u8)
    }

    pub fn max_order(&self) -> u32 {
        self.0.iter().map(|s| s.order).max().unwrap_or(0)
    }

    /// Product `self · other` in canonical form with its Koszul sign.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if other.0.is_empty() {
            return Some((false, self.clone()));
        }
        if self.0.is_empty() {
            return Some((false, other.clone()));
        }
        let a = &self.0;
        let b = &other.0;
        // odd symbols of `a` at positions >= i
        let mut odd_suffix = vec![0usize; a.len() + 1];
        for i in (0..a.len()).rev() {
            odd_suffix[i] = odd_suffix[i + 1] + a[i].odd as usize;
        }
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut neg = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                if a[i] == b[j] && a[i].odd {
                    return None;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if b[j].odd && odd_suffix[i] % 2 == 1 {
                    neg = !neg;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((neg, Monomial(out)))
    }

    /// `∂` of the monomial as a list of `(multiplicity, monomial)` terms.
    pub fn partial(&self) -> Vec<(i64, Monomial)> {
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for i in 0..self.0.len() {
            let mut syms = self.0.clone();
            syms[i] = syms[i].derive(1);
            if let Some((neg, m)) = Monomial::from_unsorted(syms) {
                *acc.entry(m).or_insert(0) += if neg { -1 } else { 1 };
            }
        }
        acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (c, m)).collect()
    }
}

/// An element of `S(C[∂] ⊗ W)` with [`Scalar`] coefficients.
#[derive(Clone)]
pub struct DiffPoly {
    space: Arc<GeneratorSpace>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.space.id == other.space.id && self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

impl DiffPoly {
    pub fn zero(space: &Arc<GeneratorSpace>) -> Self {
        DiffPoly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<GeneratorSpace>) -> Self {
        DiffPoly::constant(space, Scalar::one())
    }

    pub fn constant(space: &Arc<GeneratorSpace>, c: Scalar) -> Self {
        DiffPoly::from_term(space, Monomial::one(), c)
    }

    pub fn from_term(space: &Arc<GeneratorSpace>, m: Monomial, c: Scalar) -> Self {
        let mut p = DiffPoly::zero(space);
        p.add_term(m, c);
        p
    }

    /// The generator `gen` itself.
    pub fn var(space: &Arc<GeneratorSpace>, gen: usize) -> Self {
        DiffPoly::symbol(space, gen, 0)
    }

    /// `∂^order(gen)`
    pub fn symbol(space: &Arc<GeneratorSpace>, gen: usize, order: u32) -> Self {
        let s = space.symbol(gen, order);
        DiffPoly::from_term(space, Monomial::from_symbol(s), Scalar::one())
    }

    pub fn from_symbol(space: &Arc<GeneratorSpace>, s: DiffSymbol) -> Self {
        DiffPoly::from_term(space, Monomial::from_symbol(s), Scalar::one())
    }

    /// Looks a generator up by name.
    pub fn named(space: &Arc<GeneratorSpace>, name: &str) -> Result<Self, DiffPolyError> {
        space
            .lookup(name)
            .map(|g| DiffPoly::var(space, g))
            .ok_or_else(|| DiffPolyError::UnknownGenerator(name.to_string()))
    }

    /// Product of symbols in the given (arbitrary) order, normalized.
    pub fn product_of(space: &Arc<GeneratorSpace>, syms: Vec<DiffSymbol>, c: Scalar) -> Self {
        match Monomial::from_unsorted(syms) {
            Some((neg, m)) => DiffPoly::from_term(space, m, if neg { -c } else { c }),
            None => DiffPoly::zero(space),
        }
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn same_space(&self, other: &DiffPoly) -> bool {
        self.space.id == other.space.id
    }

    fn check_space(&self, other: &DiffPoly) -> Result<(), DiffPolyError> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(DiffPolyError::MixedSpaces(
                self.space.label.clone(),
                other.space.label.clone(),
            ))
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    /// `Some(c)` when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &DiffPoly, c: &Scalar) {
        assert!(self.same_space(other), "mixed generator spaces");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> DiffPoly {
        let mut r = DiffPoly::zero(&self.space);
        if c.is_zero() {
            return r;
        }
        for (m, v) in &self.terms {
            r.terms.insert(m.clone(), v * c);
        }
        r.terms.retain(|_, v| !v.is_zero());
        r
    }

    pub fn scale_q(&self, c: &Q) -> DiffPoly {
        self.scale(&Scalar::from_q(c.clone()))
    }

    pub fn try_add(&self, other: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
        self.check_space(other)?;
        let mut r = self.clone();
        for (m, v) in &other.terms {
            r.add_term(m.clone(), v.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
        self.check_space(other)?;
        let mut r = self.clone();
        for (m, v) in &other.terms {
            r.add_term(m.clone(), -v);
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &DiffPoly) -> Result<DiffPoly, DiffPolyError> {
        self.check_space(other)?;
        let mut r = DiffPoly::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = m1.mul(m2) {
                    let c = c1 * c2;
                    r.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(r)
    }

    /// Multiplies by a single monomial on the right.
    pub fn mul_monomial(&self, m2: &Monomial) -> DiffPoly {
        let mut r = DiffPoly::zero(&self.space);
        for (m1, c1) in &self.terms {
            if let Some((neg, m)) = m1.mul(m2) {
                r.add_term(m, if neg { -c1 } else { c1.clone() });
            }
        }
        r
    }

    /// Multiplies by a single monomial on the left.
    pub fn monomial_mul(&self, m1: &Monomial) -> DiffPoly {
        let mut r = DiffPoly::zero(&self.space);
        for (m2, c2) in &self.terms {
            if let Some((neg, m)) = m1.mul(m2) {
                r.add_term(m, if neg { -c2 } else { c2.clone() });
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut r = DiffPoly::one(&self.space);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// The even derivation `∂`.
    pub fn partial(&self) -> DiffPoly {
        let mut r = DiffPoly::zero(&self.space);
        for (m, c) in &self.terms {
            for (mult, dm) in m.partial() {
                r.add_term(dm, c.scale(&Q::from_integer(mult.into())));
            }
        }
        r
    }

    pub fn partial_n(&self, n: u32) -> DiffPoly {
        let mut r = self.clone();
        for _ in 0..n {
            r = r.partial();
        }
        r
    }

    /// `Some(p)` when every term has parity `p`; the zero polynomial is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity().is_some()
    }

    /// Highest derivative order appearing.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|m| m.max_order()).max().unwrap_or(0)
    }

    /// Highest polynomial degree appearing.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<DiffSymbol> {
        self.terms.keys().flat_map(|m| m.0.iter().copied()).collect()
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &Scalar) -> bool) -> DiffPoly {
        DiffPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_scalars(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> DiffPoly {
        let mut r = DiffPoly::zero(&self.space);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    /// Sets `k` to a rational value in all coefficients.
    pub fn specialize_k(&self, k: &Q) -> Result<DiffPoly, crate::scalar::ScalarError> {
        let mut r = DiffPoly::zero(&self.space);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.specialize(k)?);
        }
        Ok(r)
    }

    /// Replaces every symbol by `f(symbol)`, a polynomial over `target`, and
    /// multiplies out. `f` is called at most once per distinct symbol.
    pub fn map_symbols(
        &self,
        target: &Arc<GeneratorSpace>,
        mut f: impl FnMut(DiffSymbol) -> DiffPoly,
    ) -> DiffPoly {
        let mut cache: HashMap<DiffSymbol, DiffPoly> = HashMap::new();
        let mut r = DiffPoly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(target, c.clone());
            for s in &m.0 {
                let img = cache.entry(*s).or_insert_with(|| f(*s));
                assert!(img.space.id == target.id, "symbol image in foreign space");
                acc = &acc * &*img;
                if acc.is_zero() {
                    break;
                }
            }
            r += &acc;
        }
        r
    }

    /// Simultaneous substitution of symbols; symbols without a rule stay.
    pub fn substitute(
        &self,
        rules: &BTreeMap<DiffSymbol, DiffPoly>,
    ) -> Result<DiffPoly, DiffPolyError> {
        for (s, img) in rules {
            self.check_space(img)?;
            if img.parity() != Some(s.parity()) && !img.is_zero() {
                return Err(DiffPolyError::ParityMismatch {
                    symbol: crate::text::render_symbol(&self.space, s),
                });
            }
        }
        let space = self.space.clone();
        Ok(self.map_symbols(&space, |s| {
            rules
                .get(&s)
                .cloned()
                .unwrap_or_else(|| DiffPoly::from_symbol(&space, s))
        }))
    }

    /// Moves the polynomial to another space with the same generator layout.
    pub fn rebase(&self, target: &Arc<GeneratorSpace>) -> DiffPoly {
        assert_eq!(self.space.names, target.names, "incompatible generator layouts");
        DiffPoly {
            space: target.clone(),
            terms: self.terms.clone(),
        }
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({})", self)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render_diffpoly(self))
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, o: &DiffPoly) {
        assert!(self.same_space(o), "mixed generator spaces");
        for (m, v) in &o.terms {
            self.add_term(m.clone(), v.clone());
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, o: &DiffPoly) {
        assert!(self.same_space(o), "mixed generator spaces");
        for (m, v) in &o.terms {
            self.add_term(m.clone(), -v);
        }
    }
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        self.try_add(o).expect("mixed generator spaces")
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        self.try_sub(o).expect("mixed generator spaces")
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        self.try_mul(o).expect("mixed generator spaces")
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&Scalar::from_q(-Q::one()))
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, o: DiffPoly) -> DiffPoly {
        self += &o;
        self
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, o: DiffPoly) -> DiffPoly {
        self -= &o;
        self
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: DiffPoly) -> DiffPoly {
        &self * &o
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> Arc<GeneratorSpace> {
        GeneratorSpace::new(
            "t",
            [("a", Parity::Even), ("b", Parity::Even), ("psi", Parity::Odd), ("phi", Parity::Odd)],
        )
        .unwrap()
    }

    #[test]
    fn koszul_swap_and_odd_square() {
        let s = space();
        let psi = DiffPoly::named(&s, "psi").unwrap();
        let phi = DiffPoly::named(&s, "phi").unwrap();
        assert_eq!(&phi * &psi, -(&psi * &phi));
        assert!((&phi * &phi).is_zero());
        assert!((&(&phi * &psi) + &(&psi * &phi)).is_zero());
    }

    #[test]
    fn leibniz_on_two_factors() {
        let s = space();
        let a = DiffPoly::named(&s, "a").unwrap();
        let b = DiffPoly::named(&s, "b").unwrap();
        let lhs = (&a * &b).partial();
        let rhs = &(&a.partial() * &b) + &(&a * &b.partial());
        assert_eq!(lhs, rhs);
        assert!(DiffPoly::constant(&s, Scalar::k()).partial().is_zero());
    }

    #[test]
    fn odd_derivative_square_vanishes_only_when_equal() {
        let s = space();
        let psi = DiffPoly::named(&s, "psi").unwrap();
        let p = &psi * &psi.partial();
        assert_eq!(p.len(), 1);
        // ∂(ψ ∂ψ) = ψ ∂²ψ since ∂ψ ∂ψ = 0
        assert_eq!(p.partial(), &psi * &psi.partial_n(2));
    }

    #[test]
    fn mixed_spaces_rejected() {
        let s1 = space();
        let s2 = space();
        let a1 = DiffPoly::named(&s1, "a").unwrap();
        let a2 = DiffPoly::named(&s2, "a").unwrap();
        assert!(matches!(a1.try_mul(&a2), Err(DiffPolyError::MixedSpaces(..))));
    }

    #[test]
    fn names_are_checked() {
        assert!(GeneratorSpace::new("x", [("k", Parity::Even)]).is_err());
        assert!(GeneratorSpace::new("x", [("a", Parity::Even), ("a", Parity::Odd)]).is_err());
        assert!(GeneratorSpace::new("x", [("e_ev@z1", Parity::Even)]).is_ok());
    }

    #[test]
    fn substitution_checks_parity() {
        let s = space();
        let a = s.symbol(0, 0);
        let psi = DiffPoly::named(&s, "psi").unwrap();
        let mut rules = BTreeMap::new();
        rules.insert(a, psi);
        assert!(matches!(
            DiffPoly::var(&s, 0).substitute(&rules),
            Err(DiffPolyError::ParityMismatch { .. })
        ));
    }
}
