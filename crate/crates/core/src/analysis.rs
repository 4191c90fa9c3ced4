//! Closed-form comparisons between "short stratum first" and "long stratum
//! first" attacks, and between arbitrary strategies under a distribution.
//!
//! Probabilities are always named per stratum: `p_short` is the probability
//! that the password lies in the short stratum `D_s`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cost::{bf_cost, CostValue};
use crate::error::{Error, Result};
use crate::strategy::{expected_cost, Distribution, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preferred {
    ShortFirst,
    LongFirst,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStratumComparison {
    pub cost_short_first: CostValue,
    pub cost_long_first: CostValue,
    pub better: Preferred,
    /// `p_short` at which both orders cost the same.
    pub threshold_short_prob: BigRational,
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn check_sizes(size_s: &BigUint, size_l: &BigUint) -> Result<()> {
    if size_s.is_zero() || size_l.is_zero() {
        return Err(Error::Domain("stratum sizes must be at least 1".into()));
    }
    Ok(())
}

/// Expected cost of both attack orders over `D = D_s ∪ D_l`.
pub fn compare_short_long(
    size_s: &BigUint,
    size_l: &BigUint,
    p_short: &BigRational,
) -> Result<TwoStratumComparison> {
    check_sizes(size_s, size_l)?;
    if p_short.is_negative() || *p_short > BigRational::one() {
        return Err(Error::Domain(format!(
            "probability {}/{} is outside [0, 1]",
            p_short.numer(),
            p_short.denom()
        )));
    }
    let p_long = BigRational::one() - p_short;
    let bf_s = bf_cost(size_s)?.into_inner();
    let bf_l = bf_cost(size_l)?.into_inner();
    let short_first = p_short * &bf_s + &p_long * (big(size_s) + &bf_l);
    let long_first = &p_long * &bf_l + p_short * (big(size_l) + &bf_s);
    let better = match short_first.cmp(&long_first) {
        Ordering::Less => Preferred::ShortFirst,
        Ordering::Greater => Preferred::LongFirst,
        Ordering::Equal => Preferred::Tie,
    };
    Ok(TwoStratumComparison {
        cost_short_first: CostValue::new(short_first),
        cost_long_first: CostValue::new(long_first),
        better,
        threshold_short_prob: threshold_short_prob(size_s, size_l)?,
    })
}

/// `|D_s| / (|D_s| + |D_l|)`: below it, trying the long stratum first is
/// cheaper; above it, the short one.
pub fn threshold_short_prob(size_s: &BigUint, size_l: &BigUint) -> Result<BigRational> {
    check_sizes(size_s, size_l)?;
    Ok(BigRational::new(BigInt::from(size_s.clone()), BigInt::from(size_s + size_l)))
}

/// Threshold for deciding whether to try words one symbol longer:
/// `1 / (1 + |A|)`.
pub fn add_letter_threshold(alphabet_size: &BigUint) -> Result<BigRational> {
    if alphabet_size.is_zero() {
        return Err(Error::Domain("alphabet size must be at least 1".into()));
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(alphabet_size + 1u32)))
}

/// Cost of guessing the order wrong when every password is in the long
/// stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MistakeBound {
    /// `Cost(AS_s) − Cost(AS_l)` at `p_short = 0`; always `|D_s|`.
    pub difference: BigUint,
    /// `Cost(AS_s) / Cost(AS_l)` at `p_short = 0`: `1 + 2|D_s| / (1 + |D_l|)`.
    pub exact_ratio: BigRational,
}

pub fn mistake_bound(size_s: &BigUint, size_l: &BigUint) -> Result<MistakeBound> {
    let cmp = compare_short_long(size_s, size_l, &BigRational::zero())?;
    let diff = cmp.cost_short_first.value() - cmp.cost_long_first.value();
    debug_assert!(diff.is_integer());
    let difference =
        diff.to_integer().to_biguint().expect("short-first worst case is never cheaper");
    let exact_ratio = cmp.cost_short_first.value() / cmp.cost_long_first.value();
    Ok(MistakeBound { difference, exact_ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    A,
    B,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyComparison {
    pub cost_a: CostValue,
    pub cost_b: CostValue,
    pub better: Winner,
}

/// Expected cost of two strategies against the same password population.
/// Layer targets are rejected unless both strategies stratify identically.
pub fn compare_strategies(
    a: &Strategy,
    b: &Strategy,
    dist: &Distribution,
) -> Result<StrategyComparison> {
    if dist.has_layer_targets() && a.declared() != b.declared() {
        return Err(Error::LayerIndexAmbiguous);
    }
    let cost_a = expected_cost(a, dist)?;
    let cost_b = expected_cost(b, dist)?;
    let better = match cost_a.cmp(&cost_b) {
        Ordering::Less => Winner::A,
        Ordering::Greater => Winner::B,
        Ordering::Equal => Winner::Tie,
    };
    Ok(StrategyComparison { cost_a, cost_b, better })
}
