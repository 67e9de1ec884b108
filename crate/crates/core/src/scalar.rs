//! Numeric modes.
//!
//! Every probability-valued computation is generic over [`Scalar`], which is
//! implemented for `f64` (experiments) and [`Exact`] (arbitrary-precision
//! rationals, used wherever an identity must hold with equality).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational arithmetic.
pub type Exact = BigRational;

/// Absolute tolerance for float normalization checks.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// `num / den`; `den` must be non-zero.
    fn from_ratio(num: u128, den: u128) -> Self;
    fn from_f64(x: f64) -> Result<Self>;
    /// Nearest value to an exact rational.
    fn from_exact(x: &Exact) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn div(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Whether a total mass is acceptable as 1 in this numeric mode.
    fn is_unit_mass(&self) -> bool;

    fn from_u64(n: u64) -> Self {
        Self::from_ratio(n as u128, 1)
    }

    fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// Stable text rendering: shortest round-trip decimal for floats, `n/d`
    /// for rationals.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: u128, den: u128) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::InvalidDistribution(format!("non-finite value {x}")))
        }
    }
    fn from_exact(x: &Exact) -> Self {
        Scalar::to_f64(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_unit_mass(&self) -> bool {
        (self - 1.0).abs() <= FLOAT_SUM_TOLERANCE
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for Exact {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(num: u128, den: u128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    /// Converts through the shortest decimal representation, so `0.1`
    /// becomes exactly `1/10` rather than the nearest binary fraction.
    fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidDistribution(format!("non-finite value {x}")));
        }
        parse_decimal(&format!("{x}"))
    }
    fn from_exact(x: &Exact) -> Self {
        x.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_unit_mass(&self) -> bool {
        self.is_one()
    }
    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Parses `"3"`, `"-0.25"`, `"1e-3"` or `"2/7"` into an exact rational.
pub fn parse_exact(text: &str) -> Result<Exact> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad numerator in {text:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad denominator in {text:?}")))?;
        if d.is_zero() {
            return Err(Error::Format(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<Exact> {
    let bad = || Error::Format(format!("not a decimal number: {text:?}"));
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (
            &text[..pos],
            text[pos + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Binomial coefficient as an exact `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
