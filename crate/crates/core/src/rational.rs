//! Exact rational carrier and its one-point extension by `+inf`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or a bare integer `"n"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational or `+inf`. `+inf` is strictly above every rational and never
/// equal to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    PlusInfinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::PlusInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::PlusInfinity)
    }

    /// Equality against a plain rational; always false for `+inf`.
    pub fn equals(&self, r: &Rational) -> bool {
        matches!(self, ExtRational::Finite(v) if v == r)
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), PlusInfinity) => Ordering::Less,
            (PlusInfinity, Finite(_)) => Ordering::Greater,
            (PlusInfinity, PlusInfinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => f.write_str(&format_rational(r)),
            ExtRational::PlusInfinity => f.write_str("inf"),
        }
    }
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}
