//! Exact attack costs measured in expected number of guesses.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact expected number of guesses.
///
/// Strengths and brute-force costs are always half-integers. Expected costs
/// under arbitrary distribution weights may have any denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CostValue(BigRational);

impl CostValue {
    pub fn new(value: BigRational) -> Self {
        CostValue(value)
    }

    pub fn from_natural(n: &BigUint) -> Self {
        CostValue(BigRational::from_integer(BigInt::from(n.clone())))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }

    pub fn to_bits(&self) -> Result<f64> {
        to_bits(self)
    }

    /// `numerator/denominator`, the machine-readable form.
    pub fn to_fraction_string(&self) -> String {
        fraction_string(&self.0)
    }

    /// Decimal rendering rounded half-up to `places` digits.
    pub fn to_decimal_string(&self, places: usize) -> String {
        decimal_string(&self.0, places)
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fraction_string())
    }
}

impl std::ops::Add for CostValue {
    type Output = CostValue;
    fn add(self, rhs: CostValue) -> CostValue {
        CostValue(self.0 + rhs.0)
    }
}

/// Expected length of a brute-force attack over a uniformly shuffled
/// dictionary of `n` words: `(1 + n) / 2`.
pub fn bf_cost(n: &BigUint) -> Result<CostValue> {
    if n.is_zero() {
        return Err(Error::Domain("an empty dictionary cannot contain the password".into()));
    }
    let num = BigInt::from(n + 1u32);
    Ok(CostValue(BigRational::new(num, BigInt::from(2))))
}

/// `log2(2·cost − 1)`: a full space of `N` words brute-forced at cost
/// `(1+N)/2` reports exactly `log2(N)` bits.
pub fn to_bits(cost: &CostValue) -> Result<f64> {
    let one = BigRational::one();
    if cost.0 < one {
        return Err(Error::Domain(format!(
            "cost {} is below one guess",
            cost.to_fraction_string()
        )));
    }
    let doubled = &cost.0 * BigRational::from_integer(BigInt::from(2)) - one;
    let num = doubled.numer().magnitude();
    let den = doubled.denom().magnitude();
    Ok(log2_natural(num) - log2_natural(den))
}

/// log2 of an arbitrary-precision natural, accurate to f64 precision.
pub fn log2_natural(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log2() + shift as f64
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let bits = log2_natural(r.numer().magnitude()) - log2_natural(r.denom().magnitude());
    sign * bits.exp2()
}

pub(crate) fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn decimal_string(r: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    // round half up on the magnitude
    let twice = &scaled * BigRational::from_integer(BigInt::from(2));
    let floor = scaled.floor();
    let frac_twice = twice - &floor * BigRational::from_integer(BigInt::from(2));
    let rounded = match frac_twice.cmp(&BigRational::one()) {
        Ordering::Less => floor.to_integer(),
        _ => floor.to_integer() + 1,
    };
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}
