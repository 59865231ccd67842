//! Deterministic random-number plumbing.
//!
//! Every stochastic routine takes a `u64` master seed and derives
//! independent ChaCha streams from it. Stream indices are assigned by task
//! (orbit id, replica id, ...), never by thread, so results are identical at
//! any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream `idx` of the generator family identified by `seed`.
pub fn stream(seed: u64, idx: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx);
    rng
}

/// A fresh seed for a named subsystem, so that e.g. the burn-in draw and the
/// replica draws of one experiment never share a stream.
pub fn subseed(seed: u64, label: u64) -> u64 {
    // splitmix64 step; cheap and well-dispersed
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
