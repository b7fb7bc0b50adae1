use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::scalar::Q;

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Returns `None` unless `q` is a half-integer.
    pub fn from_rational(q: &Q) -> Option<Self> {
        let twice = q * Q::from_integer(BigInt::from(2));
        if !twice.is_integer() {
            return None;
        }
        twice.to_integer().to_i32().map(HalfInt)
    }

    pub fn to_rational(self) -> Q {
        Q::new(BigInt::from(self.0), BigInt::from(2))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl From<HalfInt> for Q {
    fn from(h: HalfInt) -> Q {
        h.to_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn display_and_parse() {
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
        let q = Q::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(HalfInt::from_rational(&q), Some(HalfInt::from_twice(-1)));
        assert_eq!(HalfInt::from_rational(&Q::new(BigInt::one(), BigInt::from(3))), None);
        assert!(HalfInt::from_rational(&Q::zero()).unwrap().is_integer());
    }
}
