//! Deterministic random streams.
//!
//! Everything stochastic in this crate draws from ChaCha8 generators keyed by
//! a 64-bit seed. Two derivation mechanisms cover all uses:
//!
//! * [`substream`] returns one of 2^64 independent streams under a single
//!   seed, for operations that need several generators at once (e.g. ideal
//!   sampling vs. readout flips).
//! * [`derive_seed`] mixes a seed with a task index into a fresh 64-bit seed,
//!   for experiments that fan out over repeats, cells, or sweep points.
//!
//! Results are reproducible per (seed, stream or index), independent of
//! thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded generator on the given ChaCha stream.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer over a seed and a task index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
