//! Deterministic seed derivation.
//!
//! All randomness in the crate flows through ChaCha8 keyed by a 64-bit seed,
//! so results are reproducible bit-for-bit across platforms and runs.
//! Sub-streams (per node, per sweep point, per run) are derived by folding
//! tag words into the master seed with SplitMix64 steps.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// One SplitMix64 output step.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a sub-seed from `master` and a sequence of tag words.
///
/// Distinct tag sequences give statistically independent streams; the same
/// sequence always gives the same seed.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &tag in tags {
        state = splitmix64(state ^ splitmix64(tag));
    }
    state
}

/// Builds the crate-wide RNG from a 64-bit seed.
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
