//! Deterministic random sources.
//!
//! Every random draw in the crate comes from a [`SlotRng`], a ChaCha8 stream
//! cipher generator (`rand_chacha::ChaCha8Rng`) whose 256-bit key is expanded
//! from a 64-bit seed with SplitMix64. Integer and float conversions are done
//! here rather than through `rand` distributions so that a seed produces the
//! same stream on every platform and pointer width.
//!
//! Per-slot seeds are derived from a master seed and a path of indices
//! (sweep point, iteration, purpose) by repeated SplitMix64 mixing, see
//! [`derive_seed`].

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// One SplitMix64 output step applied to `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `master` with each index in `path`, in order.
///
/// `derive_seed(s, &[a, b])` is the seed of iteration `b` at sweep point `a`.
/// Distinct paths give statistically independent streams; the function is a
/// pure function of its inputs, so work can be split across threads freely.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &idx| {
        splitmix64(acc ^ splitmix64(idx.wrapping_add(GOLDEN_GAMMA)))
    })
}

pub struct SlotRng {
    inner: ChaCha8Rng,
}

impl SlotRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        SlotRng {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`, unbiased (Lemire's multiply-shift
    /// with rejection). `bound` must be non-zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let wide = self.next_u64() as u128 * bound as u128;
            if (wide as u64) >= threshold {
                return (wide >> 64) as u64;
            }
        }
    }
}
