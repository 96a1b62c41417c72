//! Seeding helpers.
//!
//! Every simulation takes a plain `u64` seed and builds its own ChaCha8
//! stream from it. Replication batches derive per-replication seeds with
//! [`mix_seed`], the SplitMix64 output function applied to
//! `master + (index + 1) * 0x9E3779B97F4A7C15`. Any reimplementation that
//! uses the same mixer and the same ChaCha8 stream reproduces our records.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `index` under `master`.
#[inline]
pub fn mix_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
