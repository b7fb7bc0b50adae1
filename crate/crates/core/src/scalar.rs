//! Laurent polynomials in the level symbol `k` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

// Integer fast paths: most coefficients met in practice are integers, and
// `Ratio` normalizes with a gcd on every operation.
fn qmul(a: &Q, b: &Q) -> Q {
    if a.is_integer() && b.is_integer() {
        Q::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

fn qadd_assign(a: &mut Q, b: Q) {
    if a.is_integer() && b.is_integer() {
        *a = Q::from_integer(a.numer() + b.numer());
    } else {
        *a += b;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot divide by the non-monomial scalar {0}")]
    NonMonomialDivision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar {0} has a pole at k = 0")]
    PoleAtZero(String),
}

/// `sum_n c_n k^n` with finitely many nonzero `c_n`, `n` in `Z`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<i32, Q>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Self {
        Scalar::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_q(qi(n))
    }

    /// `c k^n`
    pub fn monomial(c: Q, n: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(n, c);
        }
        Scalar { terms }
    }

    /// The level symbol itself.
    pub fn k() -> Self {
        Scalar::monomial(Q::one(), 1)
    }

    pub fn k_pow(n: i32) -> Self {
        Scalar::monomial(Q::one(), n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Q)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the scalar is the constant `c` (including `0`).
    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// `Some((c, n))` when the scalar is a single nonzero term `c k^n`.
    pub fn as_monomial(&self) -> Option<(&Q, i32)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c, *e))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Q) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(e, v)| (*e, qmul(v, c))).collect(),
        }
    }

    /// Multiplicative inverse; only monomials are invertible in this ring.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self.as_monomial() {
            Some((c, n)) => Ok(Scalar::monomial(c.recip(), -n)),
            None => Err(ScalarError::NonMonomialDivision(self.to_string())),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.inv()?)
    }

    /// Evaluates at a rational value of `k`.
    pub fn eval(&self, k: &Q) -> Result<Q, ScalarError> {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            if *e < 0 && k.is_zero() {
                return Err(ScalarError::PoleAtZero(self.to_string()));
            }
            acc += c * pow_q(k, *e);
        }
        Ok(acc)
    }

    /// Same as [`Scalar::eval`] but returns the result as a constant scalar.
    pub fn specialize(&self, k: &Q) -> Result<Scalar, ScalarError> {
        self.eval(k).map(Scalar::from_q)
    }

    /// `Some(true)` for `1`, `Some(false)` for `-1`.
    fn as_unit_constant(&self) -> Option<bool> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if *e != 0 || !c.is_integer() {
            return None;
        }
        let n = c.numer();
        if n.is_one() {
            Some(true)
        } else if (-n).is_one() {
            Some(false)
        } else {
            None
        }
    }

    fn add_term(&mut self, e: i32, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        qadd_assign(entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Renders the scalar as a standalone factor. A sum of several terms is parenthesized.
    pub fn render_factor(&self) -> String {
        if self.terms.len() <= 1 {
            self.to_string()
        } else {
            format!("({})", self)
        }
    }
}

fn pow_q(k: &Q, e: i32) -> Q {
    let mut acc = Q::one();
    let base = if e < 0 { k.recip() } else { k.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Renders a rational magnitude: `3`, `(1/2)`.
pub(crate) fn render_abs_q(c: &Q) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.to_integer().to_string()
    } else {
        format!("({}/{})", a.numer(), a.denom())
    }
}

fn render_k_pow(e: i32) -> String {
    match e {
        1 => "k".to_string(),
        _ => format!("k^{}", e),
    }
}

fn render_term_abs(c: &Q, e: i32) -> String {
    if e == 0 {
        return render_abs_q(c);
    }
    let a = c.abs();
    if a.is_one() {
        render_k_pow(e)
    } else {
        format!("{}{}", render_abs_q(c), render_k_pow(e))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power first
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", render_term_abs(c, *e))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl From<Q> for Scalar {
    fn from(c: Q) -> Self {
        Scalar::from_q(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        for (e, c) in &o.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        for (e, c) in &o.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if let Some(c) = o.as_unit_constant() {
            return if c { self.clone() } else { -self };
        }
        if let Some(c) = self.as_unit_constant() {
            return if c { o.clone() } else { -o };
        }
        if o.terms.len() == 1 {
            let (e2, c2) = o.terms.iter().next().expect("one term");
            return Scalar {
                terms: self.terms.iter().map(|(e1, c1)| (e1 + e2, qmul(c1, c2))).collect(),
            };
        }
        let mut r = Scalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1 + e2, qmul(c1, c2));
            }
        }
        r
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let a = &Scalar::k() + &Scalar::from_int(2);
        let b = &Scalar::k_pow(-1) - &Scalar::one();
        let p = &a * &b;
        // (k + 2)(k^-1 - 1) = 1 - k + 2k^-1 - 2 = -k - 1 + 2k^-1
        assert_eq!(p.to_string(), "-k - 1 + 2k^-1");
        assert_eq!(p.eval(&qi(2)).unwrap(), qi(-2));
    }

    #[test]
    fn only_monomials_invert() {
        let half_k = Scalar::monomial(q(1, 2), 1);
        assert_eq!(half_k.inv().unwrap().to_string(), "2k^-1");
        let s = &Scalar::k() + &Scalar::one();
        assert!(matches!(s.inv(), Err(ScalarError::NonMonomialDivision(_))));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn pole_at_zero() {
        assert!(Scalar::k_pow(-2).eval(&Q::zero()).is_err());
        assert_eq!(Scalar::monomial(q(-1, 2), -1).to_string(), "-(1/2)k^-1");
    }
}
