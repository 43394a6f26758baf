//! Exact half-integer quantum numbers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A half-integer stored as twice its value, so `1/2` is `HalfInt { twice: 1 }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// `j(j+1)`, the Casimir eigenvalue.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }

    /// Four times the Casimir, always an exact integer.
    pub const fn casimir_x4(self) -> i64 {
        self.twice * (self.twice + 2)
    }

    /// Multiplet dimension `2j+1`. Only meaningful for `j >= 0`.
    pub const fn dim(self) -> usize {
        (self.twice + 1) as usize
    }

    /// Integer value of `self`, when it is one.
    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    /// Projections `m = j, j-1, ..., -j`; index `k` of the iterator is `m = j - k`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let j = self.twice;
        (0..(j + 1).max(0) as usize).map(move |k| HalfInt { twice: j - 2 * k as i64 })
    }

    /// Index of projection `m` inside the multiplet of `self` (descending order).
    pub fn index_of(self, m: HalfInt) -> Option<usize> {
        if self.is_valid_projection(m) {
            Some(((self.twice - m.twice) / 2) as usize)
        } else {
            None
        }
    }

    /// `|m| <= j` and `j - m` integral.
    pub fn is_valid_projection(self, m: HalfInt) -> bool {
        self.twice >= 0 && m.twice.abs() <= self.twice && (self.twice - m.twice) % 2 == 0
    }

    /// Allowed couplings `|a-b|, ..., a+b` in ascending order.
    pub fn couplings(a: HalfInt, b: HalfInt) -> impl DoubleEndedIterator<Item = HalfInt> {
        let lo = (a.twice - b.twice).abs();
        let count = (a.twice + b.twice - lo) / 2 + 1;
        (0..count).map(move |k| HalfInt::from_twice(lo + 2 * k))
    }

    pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
        a.twice >= 0
            && b.twice >= 0
            && c.twice >= 0
            && c.twice >= (a.twice - b.twice).abs()
            && c.twice <= a.twice + b.twice
            && (a.twice + b.twice + c.twice) % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"n"` or `"n/2"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::int).map_err(|_| bad()),
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                num.trim().parse::<i64>().map(HalfInt::from_twice).map_err(|_| bad())
            }
        }
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HalfInt {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}
