//! Named, reproducible random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the user seed, with the
//! stream id obtained by mixing a list of tags (user, trial, purpose, ...).
//! Independent trials therefore never share state and results do not depend
//! on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub mod tag {
    pub const ARRIVALS: u64 = 0xA1;
    pub const NOISE: u64 = 0xB2;
    pub const CODEBOOK: u64 = 0xC3;
    pub const PREAMBLE: u64 = 0xC4;
    pub const MESSAGE: u64 = 0xD5;
    pub const SYMBOLS: u64 = 0xE6;
    pub const OFFSETS: u64 = 0xF7;
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(tags: &[u64]) -> u64 {
    tags.iter().fold(0x5EED_0000_0000_0001u64, |acc, &t| splitmix(acc ^ splitmix(t)))
}

/// Stream for `(seed, tags...)`.
pub fn stream(seed: u64, tags: &[u64]) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(mix(tags));
    rng
}
