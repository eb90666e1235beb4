//! Deterministic, replayable randomness.
//!
//! Every randomized routine receives an explicit [`RngStream`]; there is no
//! global RNG state. A stream is a 64-bit key; child streams are derived by
//! mixing a tag into the key, so a run keyed by `(terminal, phase, step,
//! iteration)` can be replayed exactly without recording transcripts.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A derivable source of seeded RNGs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    key: u64,
}

// splitmix64 finalizer; good avalanche for key derivation.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { key: mix(seed) }
    }

    /// Derives a child stream for a tagged sub-computation.
    pub fn child(&self, tag: u64) -> Self {
        RngStream {
            key: mix(self.key ^ mix(tag)),
        }
    }

    /// Two-level tag helper for nested loops.
    pub fn child2(&self, a: u64, b: u64) -> Self {
        self.child(a).child(b)
    }

    /// Instantiates the RNG for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }

    pub fn key(&self) -> u64 {
        self.key
    }
}

/// Samples a subset of `items`, keeping each with probability `p` (clamped to
/// `[0,1]`).
pub fn sample_subset<T: Copy>(items: &[T], p: f64, rng: &mut impl Rng) -> Vec<T> {
    let p = p.clamp(0.0, 1.0);
    items
        .iter()
        .copied()
        .filter(|_| rng.gen::<f64>() < p)
        .collect()
}
