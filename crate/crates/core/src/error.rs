use num_bigint::BigUint;
use thiserror::Error;

use crate::ingest::ParseError;

/// Errors produced by the model, layer, analysis and simulation operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("password is not covered by the strategy (dictionary size {total})")]
    NotCovered { total: BigUint },

    #[error("distribution has no entries")]
    EmptyDistribution,

    #[error("distribution weights sum to zero")]
    ZeroTotalWeight,

    #[error("distribution weight must be positive, got {0}")]
    NonPositiveWeight(String),

    #[error("layer index {index} is out of range (strategy has {layers} effective layers)")]
    LayerOutOfRange { index: usize, layers: usize },

    #[error("layer targets are only meaningful for a single stratification; use explicit passwords to compare different strategies")]
    LayerIndexAmbiguous,

    #[error("duplicate word in input: {0:?}")]
    DuplicateInInput(String),

    #[error("invalid alphabet {name:?}: {reason}")]
    InvalidAlphabet { name: String, reason: String },

    #[error("invalid layer: {0}")]
    InvalidLayer(String),

    #[error("materialization of {needed} words exceeds the cap of {cap}")]
    CapExceeded { needed: BigUint, cap: u64 },

    #[error("cannot decide the overlap between layer {first} and layer {second}; declare `assume_disjoint true` if they are known to be disjoint")]
    UndecidableOverlap { first: usize, second: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
