//! The reference generator: splitmix64, with rejection-sampled uniform
//! integers so every implementation reproduces the same streams.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 output finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `i`: independent of the order trials run in.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    mix(seed ^ i.wrapping_mul(GOLDEN_GAMMA))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, m)`. Draws are rejected when at or above the largest
    /// multiple of `m` that fits in 64 bits.
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0, "empty range");
        let limit = (u64::MAX as u128 + 1) / m as u128 * m as u128;
        loop {
            let x = self.next_u64();
            if (x as u128) < limit {
                return x % m;
            }
        }
    }

    /// Uniform in `[0, m)` for arbitrary-precision `m`, assembling as many
    /// 64-bit draws as `m` needs (most significant draw first) and rejecting
    /// at or above the largest fitting multiple of `m`.
    pub fn below_big(&mut self, m: &BigUint) -> BigUint {
        assert!(!m.is_zero(), "empty range");
        if let Some(small) = m.to_u64() {
            return BigUint::from(self.below(small));
        }
        let words = m.bits().div_ceil(64) as usize;
        let span = BigUint::one() << (64 * words);
        let limit = &span / m * m;
        loop {
            let mut x = BigUint::zero();
            for _ in 0..words {
                x = (x << 64u32) + BigUint::from(self.next_u64());
            }
            if x < limit {
                return x % m;
            }
        }
    }
}
