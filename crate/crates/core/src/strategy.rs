//! Attacker strategies as ordered disjoint strata, and the strength of a
//! password against one.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cost::{bf_cost, CostValue};
use crate::error::{Error, Result};
use crate::layers::{effective_layers, EffectiveLayer, LayerSpec, DEFAULT_CAP};
use crate::word::Word;

/// Options controlling how a strategy is stratified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyOptions {
    /// Take declared layers to be pairwise disjoint without checking.
    pub assume_disjoint: bool,
    /// Largest number of words any operation may materialize.
    pub cap: u64,
}

impl Default for StrategyOptions {
    fn default() -> Self {
        StrategyOptions { assume_disjoint: false, cap: DEFAULT_CAP }
    }
}

/// An ordered list of layers. Its effective layers are pairwise disjoint
/// and `cumulative[k]` is the number of words in the first `k` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    declared: Vec<LayerSpec>,
    effective: Vec<EffectiveLayer>,
    dropped: Vec<EffectiveLayer>,
    cumulative: Vec<BigUint>,
    options: StrategyOptions,
    warnings: Vec<String>,
}

impl Strategy {
    pub fn new(layers: Vec<LayerSpec>) -> Result<Self> {
        Self::with_options(layers, StrategyOptions::default())
    }

    pub fn with_options(layers: Vec<LayerSpec>, options: StrategyOptions) -> Result<Self> {
        let strat = effective_layers(&layers, options.assume_disjoint, options.cap)?;
        let mut cumulative = Vec::with_capacity(strat.layers.len() + 1);
        cumulative.push(BigUint::zero());
        for layer in &strat.layers {
            let next = cumulative.last().unwrap() + &layer.size;
            cumulative.push(next);
        }
        Ok(Strategy {
            declared: layers,
            effective: strat.layers,
            dropped: strat.dropped,
            cumulative,
            options,
            warnings: strat.warnings,
        })
    }

    pub fn declared(&self) -> &[LayerSpec] {
        &self.declared
    }

    pub fn layers(&self) -> &[EffectiveLayer] {
        &self.effective
    }

    pub fn dropped(&self) -> &[EffectiveLayer] {
        &self.dropped
    }

    /// `cumulative()[k]` = `|AS_k|`, with `cumulative()[0] == 0`.
    pub fn cumulative(&self) -> &[BigUint] {
        &self.cumulative
    }

    /// Total dictionary size.
    pub fn total(&self) -> &BigUint {
        self.cumulative.last().unwrap()
    }

    pub fn options(&self) -> StrategyOptions {
        self.options
    }

    pub fn cap(&self) -> u64 {
        self.options.cap
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Size of effective layer `k` (1-based).
    pub fn layer_size(&self, k: usize) -> Result<&BigUint> {
        self.effective_layer(k).map(|l| &l.size)
    }

    pub fn effective_layer(&self, k: usize) -> Result<&EffectiveLayer> {
        if k == 0 || k > self.effective.len() {
            return Err(Error::LayerOutOfRange { index: k, layers: self.effective.len() });
        }
        Ok(&self.effective[k - 1])
    }

    /// Cost of a password drawn uniformly from effective layer `k`:
    /// `cum_{k-1} + (1 + |L_k|)/2`.
    pub fn layer_cost(&self, k: usize) -> Result<CostValue> {
        let size = self.layer_size(k)?;
        Ok(CostValue::from_natural(&self.cumulative[k - 1]) + bf_cost(size)?)
    }

    pub fn locate(&self, pw: &Word) -> Result<usize> {
        locate(self, pw)
    }

    pub fn strength(&self, pw: &Word) -> Result<StrengthReport> {
        strength(self, pw)
    }

    /// Enumerates effective layer `k` in canonical order, skipping words
    /// claimed by earlier layers.
    pub fn enumerate_layer(&self, k: usize) -> Result<Vec<String>> {
        let layer = self.effective_layer(k)?;
        let earlier = &self.effective[..k - 1];
        let mut words = Vec::new();
        for w in layer.spec.enumerate() {
            if !self.options.assume_disjoint {
                let mut claimed = false;
                for e in earlier {
                    if e.spec.contains(&w, self.options.cap)? {
                        claimed = true;
                        break;
                    }
                }
                if claimed {
                    continue;
                }
            }
            words.push(w);
        }
        Ok(words)
    }
}

/// The strength of a password against a strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthReport {
    /// 1-based effective layer containing the password.
    pub layer_index: usize,
    /// Words in all earlier layers, `cum_{k-1}`.
    pub preceding: BigUint,
    pub layer_size: BigUint,
    pub strength: CostValue,
    pub bits: f64,
}

/// 1-based index of the effective layer containing `pw`.
pub fn locate(strategy: &Strategy, pw: &Word) -> Result<usize> {
    if strategy.effective.is_empty() {
        return Err(Error::Domain("strategy has no layers".into()));
    }
    for (i, layer) in strategy.effective.iter().enumerate() {
        if layer.spec.contains(pw.as_str(), strategy.options.cap)? {
            return Ok(i + 1);
        }
    }
    Err(Error::NotCovered { total: strategy.total().clone() })
}

/// `S(AS, pw) = |AS_{k-1}| + BF(AS_k \ AS_{k-1})`.
pub fn strength(strategy: &Strategy, pw: &Word) -> Result<StrengthReport> {
    let k = locate(strategy, pw)?;
    let strength = strategy.layer_cost(k)?;
    let bits = strength.to_bits()?;
    Ok(StrengthReport {
        layer_index: k,
        preceding: strategy.cumulative[k - 1].clone(),
        layer_size: strategy.effective[k - 1].size.clone(),
        strength,
        bits,
    })
}

/// What a distribution entry puts weight on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// Uniform over effective layer `k` (1-based).
    Layer(usize),
    Word(Word),
}

/// A normalized, weighted population of defender passwords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    entries: Vec<(Target, BigRational)>,
}

impl Distribution {
    /// Normalizes `entries` so the weights sum to one.
    pub fn new(entries: Vec<(Target, BigRational)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let mut total = BigRational::zero();
        for (target, w) in &entries {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight(crate::cost::fraction_string(w)));
            }
            if let Target::Layer(0) = target {
                return Err(Error::LayerOutOfRange { index: 0, layers: 0 });
            }
            total += w;
        }
        if total.is_zero() {
            return Err(Error::ZeroTotalWeight);
        }
        let entries = entries.into_iter().map(|(t, w)| (t, w / &total)).collect();
        Ok(Distribution { entries })
    }

    /// All mass on one target.
    pub fn single(target: Target) -> Self {
        Distribution { entries: vec![(target, BigRational::one())] }
    }

    pub fn entries(&self) -> &[(Target, BigRational)] {
        &self.entries
    }

    pub fn has_layer_targets(&self) -> bool {
        self.entries.iter().any(|(t, _)| matches!(t, Target::Layer(_)))
    }

    /// Mixture `weight·self + (1 − weight)·other`.
    pub fn mix(&self, other: &Distribution, weight: &BigRational) -> Result<Distribution> {
        let one = BigRational::one();
        let mut entries: Vec<(Target, BigRational)> = Vec::new();
        if weight.is_positive() {
            entries.extend(self.entries.iter().map(|(t, w)| (t.clone(), w * weight)));
        }
        let rest = &one - weight;
        if rest.is_positive() {
            entries.extend(other.entries.iter().map(|(t, w)| (t.clone(), w * &rest)));
        }
        Distribution::new(entries)
    }
}

/// Expected attack cost: the weighted sum of target strengths.
pub fn expected_cost(strategy: &Strategy, dist: &Distribution) -> Result<CostValue> {
    let mut total = BigRational::zero();
    for (target, weight) in dist.entries() {
        let cost = match target {
            Target::Layer(k) => strategy.layer_cost(*k)?,
            Target::Word(w) => strength(strategy, w)?.strength,
        };
        total += cost.into_inner() * weight;
    }
    Ok(CostValue::new(total))
}

/// Makes two duplicate-free dictionaries permutations of each other by
/// appending to each the words only the other has, in the other's order.
pub fn merge_dictionaries(d1: &[String], d2: &[String]) -> Result<(Vec<String>, Vec<String>)> {
    use std::collections::HashSet;
    let set = |d: &[String]| -> Result<HashSet<String>> {
        let mut s = HashSet::with_capacity(d.len());
        for w in d {
            if !s.insert(w.clone()) {
                return Err(Error::DuplicateInInput(w.clone()));
            }
        }
        Ok(s)
    };
    let s1 = set(d1)?;
    let s2 = set(d2)?;
    let mut m1 = d1.to_vec();
    m1.extend(d2.iter().filter(|w| !s1.contains(*w)).cloned());
    let mut m2 = d2.to_vec();
    m2.extend(d1.iter().filter(|w| !s2.contains(*w)).cloned());
    Ok((m1, m2))
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
