//! Expansion of one top-level seed into independent per-purpose seeds.
//!
//! Sub-seed `k` is the `(k + 1)`-th output of a splitmix64 generator started
//! at the top-level seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purposes that receive their own seed, in expansion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedStream {
    Smote = 0,
    Subsample = 1,
    Init = 2,
    Split = 3,
}

/// One splitmix64 step: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stream: SeedStream) -> u64 {
    let mut state = master;
    let mut out = 0;
    for _ in 0..=stream as usize {
        out = splitmix64(&mut state);
    }
    out
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
