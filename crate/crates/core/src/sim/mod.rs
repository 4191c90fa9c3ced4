//! Seeded Monte Carlo guessing attacks.
//!
//! Every trial draws from its own generator seeded by [`rng::trial_seed`],
//! so results depend only on `(strategy, distribution, config)` and not on
//! how trials are scheduled. Within a trial the draws are, in order: the
//! distribution entry, the in-layer index (layer targets only), then the
//! attack itself, whose shape depends on the mode.

pub mod rng;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cost::{rational_to_f64, CostValue};
use crate::error::{Error, Result};
use crate::layers::{fits, DEFAULT_CAP};
use crate::strategy::{expected_cost, locate, Distribution, Strategy, Target};
use crate::word::Word;
use rng::{trial_seed, SplitMix64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimMode {
    /// Shuffle the password's layer and find its position.
    Shuffle,
    /// Draw the in-layer position directly.
    Rank,
    /// Shuffle every layer, concatenate, and scan word by word.
    Full,
}

impl SimMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SimMode::Shuffle => "shuffle",
            SimMode::Rank => "rank",
            SimMode::Full => "full",
        }
    }
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "shuffle" => Ok(SimMode::Shuffle),
            "rank" => Ok(SimMode::Rank),
            "full" => Ok(SimMode::Full),
            _ => Err(format!("unknown mode {s:?} (expected shuffle, rank or full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub mode: SimMode,
    pub trials: u64,
    pub seed: u64,
    pub materialize_cap: u64,
    /// Worker threads; 0 or 1 runs serially.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(mode: SimMode, trials: u64, seed: u64) -> Self {
        SimConfig { mode, trials, seed, materialize_cap: DEFAULT_CAP, threads: 1 }
    }
}

/// Empirical moments of the attack length.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub count: u64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub stddev: f64,
    pub standard_error: f64,
    pub min: BigUint,
    pub max: BigUint,
    pub mean_exact: BigRational,
    pub sum: BigUint,
    pub sum_squares: BigUint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub stats: TrialStats,
    pub analytic: CostValue,
    pub z: f64,
    /// `|mean − analytic|`.
    pub deviation: f64,
    /// `z · standard_error`.
    pub margin: f64,
    pub pass: bool,
}

struct Materialized {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

enum Resolved {
    Layer(usize),
    Word { layer: usize, word: Word },
}

struct Simulator<'a> {
    strategy: &'a Strategy,
    mode: SimMode,
    cap: u64,
    layers: Vec<OnceLock<Result<Arc<Materialized>>>>,
}

impl<'a> Simulator<'a> {
    fn new(strategy: &'a Strategy, mode: SimMode, cap: u64) -> Self {
        let layers = (0..strategy.layers().len()).map(|_| OnceLock::new()).collect();
        Simulator { strategy, mode, cap, layers }
    }

    fn check_cap(&self, k: usize) -> Result<()> {
        let needed = match self.mode {
            SimMode::Rank => return Ok(()),
            SimMode::Shuffle => self.strategy.layer_size(k)?.clone(),
            SimMode::Full => self.strategy.total().clone(),
        };
        if fits(&needed, self.cap) {
            Ok(())
        } else {
            Err(Error::CapExceeded { needed, cap: self.cap })
        }
    }

    fn materialized(&self, k: usize) -> Result<Arc<Materialized>> {
        self.layers[k - 1]
            .get_or_init(|| {
                let words = self.strategy.enumerate_layer(k)?;
                let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
                Ok(Arc::new(Materialized { words, index }))
            })
            .clone()
    }

    fn resolve(&self, target: &Target) -> Result<Resolved> {
        let resolved = match target {
            Target::Layer(k) => {
                self.strategy.layer_size(*k)?;
                Resolved::Layer(*k)
            }
            Target::Word(w) => Resolved::Word { layer: locate(self.strategy, w)?, word: w.clone() },
        };
        let k = match &resolved {
            Resolved::Layer(k) | Resolved::Word { layer: k, .. } => *k,
        };
        self.check_cap(k)?;
        if self.mode == SimMode::Full {
            for j in 1..=self.strategy.layers().len() {
                self.materialized(j)?;
            }
        } else if self.mode == SimMode::Shuffle && matches!(resolved, Resolved::Word { .. }) {
            self.materialized(k)?;
        }
        Ok(resolved)
    }

    fn word_index(&self, k: usize, word: &str) -> Result<usize> {
        self.materialized(k)?
            .index
            .get(word)
            .copied()
            .ok_or_else(|| Error::NotCovered { total: self.strategy.total().clone() })
    }

    /// One attack against a resolved target, consuming draws from `rng`.
    fn attack(&self, target: &Resolved, rng: &mut SplitMix64) -> Result<BigUint> {
        let (k, fixed_word) = match target {
            Resolved::Layer(k) => (*k, None),
            Resolved::Word { layer, word } => (*layer, Some(word.as_str())),
        };
        let size = self.strategy.layer_size(k)?;
        let preceding = &self.strategy.cumulative()[k - 1];
        // in-layer index of the password in canonical order
        let drawn = match fixed_word {
            None => Some(rng.below_big(size)),
            Some(_) => None,
        };
        match self.mode {
            SimMode::Rank => Ok(preceding + rng.below_big(size) + 1u32),
            SimMode::Shuffle => {
                let n = size.to_usize().expect("layer size checked against the cap");
                let index = match (drawn, fixed_word) {
                    (Some(i), _) => i.to_usize().expect("index below layer size"),
                    (None, Some(w)) => self.word_index(k, w)?,
                    (None, None) => unreachable!(),
                };
                let position = shuffled_position(n, index, rng);
                Ok(preceding + BigUint::from(position + 1))
            }
            SimMode::Full => {
                let word = match (drawn, fixed_word) {
                    (Some(i), _) => {
                        let i = i.to_usize().expect("index below layer size");
                        self.materialized(k)?.words[i].clone()
                    }
                    (None, Some(w)) => w.to_string(),
                    (None, None) => unreachable!(),
                };
                let mut guesses = 0u64;
                for j in 1..=self.strategy.layers().len() {
                    let mut order = self.materialized(j)?.words.clone();
                    fisher_yates(&mut order, rng);
                    for candidate in &order {
                        guesses += 1;
                        if *candidate == word {
                            return Ok(BigUint::from(guesses));
                        }
                    }
                }
                Err(Error::NotCovered { total: self.strategy.total().clone() })
            }
        }
    }
}

/// Fisher-Yates from index `n − 1` down to 1, swapping with a uniform
/// index in `[0, i]`.
pub fn fisher_yates<T>(items: &mut [T], rng: &mut SplitMix64) {
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// Final position of the element starting at `index` after [`fisher_yates`]
/// on `n` elements, tracked without materializing the permutation.
pub fn shuffled_position(n: usize, index: usize, rng: &mut SplitMix64) -> usize {
    let mut pos = index;
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        if pos == i {
            pos = j;
        } else if pos == j {
            pos = i;
        }
    }
    pos
}

/// Attack length against one covered password with a generator seeded by
/// `seed`.
pub fn simulate_attack(
    strategy: &Strategy,
    target: &Word,
    seed: u64,
    mode: SimMode,
    cap: u64,
) -> Result<BigUint> {
    let sim = Simulator::new(strategy, mode, cap);
    let resolved = sim.resolve(&Target::Word(target.clone()))?;
    sim.attack(&resolved, &mut SplitMix64::new(seed))
}

struct EntryPicker {
    bounds: Vec<BigUint>,
    total: BigUint,
}

impl EntryPicker {
    fn new(dist: &Distribution) -> Self {
        let denom = dist.entries().iter().fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
        let mut bounds = Vec::with_capacity(dist.entries().len());
        let mut acc = BigUint::zero();
        for (_, w) in dist.entries() {
            let scaled = (w * BigRational::from_integer(denom.clone())).to_integer();
            acc += scaled.to_biguint().expect("weights are positive");
            bounds.push(acc.clone());
        }
        EntryPicker { bounds, total: acc }
    }

    fn pick(&self, rng: &mut SplitMix64) -> usize {
        let r = rng.below_big(&self.total);
        self.bounds.iter().position(|b| r < *b).expect("draw below total")
    }
}

#[derive(Clone)]
struct Acc {
    count: u64,
    sum: BigUint,
    sum_squares: BigUint,
    min: Option<BigUint>,
    max: Option<BigUint>,
}

impl Acc {
    fn empty() -> Self {
        Acc { count: 0, sum: BigUint::zero(), sum_squares: BigUint::zero(), min: None, max: None }
    }

    fn push(mut self, x: BigUint) -> Self {
        self.count += 1;
        self.sum_squares += &x * &x;
        self.sum += &x;
        self.min = Some(match self.min {
            Some(m) if m <= x => m,
            _ => x.clone(),
        });
        self.max = Some(match self.max {
            Some(m) if m >= x => m,
            _ => x,
        });
        self
    }

    fn merge(mut self, other: Acc) -> Self {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_squares += other.sum_squares;
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = match (self.max, other.max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn finish(self) -> TrialStats {
        let n = BigInt::from(self.count);
        let sum = BigInt::from(self.sum.clone());
        let sum_sq = BigInt::from(self.sum_squares.clone());
        let mean_exact = BigRational::new(sum.clone(), n.clone());
        let variance = if self.count > 1 {
            BigRational::new(&n * &sum_sq - &sum * &sum, &n * (&n - 1))
        } else {
            BigRational::zero()
        };
        let stddev = rational_to_f64(&variance).sqrt();
        TrialStats {
            count: self.count,
            mean: rational_to_f64(&mean_exact),
            stddev,
            standard_error: stddev / (self.count as f64).sqrt(),
            min: self.min.unwrap_or_default(),
            max: self.max.unwrap_or_default(),
            mean_exact,
            sum: self.sum,
            sum_squares: self.sum_squares,
        }
    }
}

/// Runs `cfg.trials` independent attacks against passwords drawn from
/// `dist` and aggregates their lengths.
pub fn run_trials(strategy: &Strategy, dist: &Distribution, cfg: &SimConfig) -> Result<TrialStats> {
    if cfg.trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    if dist.entries().is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let sim = Simulator::new(strategy, cfg.mode, cfg.materialize_cap);
    let targets: Vec<Resolved> =
        dist.entries().iter().map(|(t, _)| sim.resolve(t)).collect::<Result<_>>()?;
    let picker = EntryPicker::new(dist);

    let trial = |i: u64| -> Result<BigUint> {
        let mut rng = SplitMix64::new(trial_seed(cfg.seed, i));
        let entry = picker.pick(&mut rng);
        sim.attack(&targets[entry], &mut rng)
    };

    let acc = if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker threads: {e}")))?;
        pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(trial)
                .try_fold(Acc::empty, |acc, x| x.map(|x| acc.push(x)))
                .try_reduce(Acc::empty, |a, b| Ok(a.merge(b)))
        })?
    } else {
        let mut acc = Acc::empty();
        for i in 0..cfg.trials {
            acc = acc.push(trial(i)?);
        }
        acc
    };
    Ok(acc.finish())
}

/// Compares the simulated mean attack length with the analytic expected
/// cost: passes when they differ by at most `z` standard errors.
pub fn verify_analytic(
    strategy: &Strategy,
    dist: &Distribution,
    cfg: &SimConfig,
    z: f64,
) -> Result<VerifyReport> {
    let analytic = expected_cost(strategy, dist)?;
    verify_against(strategy, dist, cfg, z, analytic)
}

/// As [`verify_analytic`], against a caller-supplied analytic value.
pub fn verify_against(
    strategy: &Strategy,
    dist: &Distribution,
    cfg: &SimConfig,
    z: f64,
    analytic: CostValue,
) -> Result<VerifyReport> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!("z must be positive, got {z}")));
    }
    let stats = run_trials(strategy, dist, cfg)?;
    let deviation = rational_to_f64(&(&stats.mean_exact - analytic.value()).abs());
    let margin = z * stats.standard_error;
    Ok(VerifyReport { pass: deviation <= margin, stats, analytic, z, deviation, margin })
}
