//! Password strength as the expected cost of a guessing attack.
//!
//! An attacker strategy is an ordered list of layers (exhaustive spaces,
//! word lists, mangled or combined word lists). After earlier-wins
//! deduplication the layers are disjoint strata `L_1, …, L_n`; a password in
//! stratum `k` has strength `|L_1| + … + |L_{k-1}| + (1 + |L_k|)/2`, the
//! expected number of guesses when the attacker knows the strata but not
//! their internal order.

pub mod analysis;
pub mod cost;
pub mod error;
pub mod ingest;
pub mod layers;
pub mod sim;
pub mod strategy;
pub mod word;

pub use analysis::{
    add_letter_threshold, compare_short_long, compare_strategies, mistake_bound,
    threshold_short_prob, MistakeBound, Preferred, StrategyComparison, TwoStratumComparison,
    Winner,
};
pub use cost::{bf_cost, to_bits, CostValue};
pub use error::{Error, Result};
pub use layers::{
    cardinality, contains, effective_layers, enumerate, intersection_size, mangle, EffectiveLayer,
    LayerSpec, MangleRule, Overlap, WordOrdering, WordSource, DEFAULT_CAP,
};
pub use sim::{run_trials, simulate_attack, verify_analytic, SimConfig, SimMode, TrialStats};
pub use strategy::{
    expected_cost, locate, merge_dictionaries, strength, Distribution, Strategy, StrategyOptions,
    StrengthReport, Target,
};
pub use word::{Alphabet, Word};
