//! Counter-based random streams.
//!
//! Every Monte Carlo consumer asks for the stream of a `(seed, index)` pair.
//! ChaCha's 64-bit stream id gives independent sequences without any shared
//! mutable state, so results do not depend on how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Replicates per stream block in the replication loops.
pub const BLOCK: usize = 1024;

pub fn stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives a child seed, e.g. one per experiment within a run.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    // SplitMix64 finalizer.
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
