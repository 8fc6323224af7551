//! Exact scalars.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator, so `==` is structural equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Marker for scalar types whose arithmetic never rounds.
///
/// Sealed: floating-point types cannot implement it, so APIs bounded by
/// `Exact` can never be instantiated with them.
pub trait Exact: sealed::Sealed + Clone + Ord {}

mod sealed {
    pub trait Sealed {}
    impl Sealed for super::Rational {}
    impl Sealed for super::Integer {}
    impl Sealed for super::Theta {}
    impl Sealed for u32 {}
    impl Sealed for u64 {}
    impl Sealed for usize {}
}

impl Exact for Rational {}
impl Exact for Integer {}
impl Exact for Theta {}
impl Exact for u32 {}
impl Exact for u64 {}
impl Exact for usize {}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_integer(value: &Integer) -> Rational {
    Rational::from_integer(value.clone())
}

pub fn pow2(exponent: u32) -> Integer {
    BigInt::one() << exponent as usize
}

/// Binomial coefficient `C(n, k)` as an exact integer; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Least common multiple of the denominators of `values` (1 for an empty input).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Integer {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with decimal integers.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` when the denominator is one. Never a decimal.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Incumbent objective value: `-inf` or an exact rational.
///
/// The derived order puts `NegInfinity` below every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Theta {
    #[default]
    NegInfinity,
    Finite(Rational),
}

impl Theta {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Theta::NegInfinity => None,
            Theta::Finite(v) => Some(v),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Theta::Finite(_))
    }

    /// `value >= self`, with every rational above `-inf`.
    pub fn admits(&self, value: &Rational) -> bool {
        match self {
            Theta::NegInfinity => true,
            Theta::Finite(t) => value >= t,
        }
    }

    pub fn compare(&self, value: &Rational) -> Ordering {
        match self {
            Theta::NegInfinity => Ordering::Less,
            Theta::Finite(t) => t.cmp(value),
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::NegInfinity => f.write_str("-inf"),
            Theta::Finite(v) => write!(f, "{v}"),
        }
    }
}
