use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use super::Rational;
use crate::error::{Error, Result};

/// An element of ½ℤ stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// `n + 1/2`.
    pub const fn half_odd(n: i64) -> Self {
        HalfInt(2 * n + 1)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Integer value, if this is an integer.
    pub fn to_int(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.0), BigInt::from(2))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `(-1)^(self - 1/2)` for a half-odd `self`.
    pub fn sign_minus_half(self) -> i64 {
        debug_assert!(self.is_half_odd());
        let e = (self.0 - 1) / 2;
        if e.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Parses `"a/2"` or an integer.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                match d.trim() {
                    "2" => Ok(HalfInt(n)),
                    "1" => Ok(HalfInt(2 * n)),
                    _ => Err(bad()),
                }
            }
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
        }
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

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}
