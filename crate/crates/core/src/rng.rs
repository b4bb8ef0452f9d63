//! Per-replicate random streams.
//!
//! Every replicate draws from ChaCha8 keyed by the user seed, with the
//! replicate index as the ChaCha stream id. Streams never overlap and do not
//! depend on how replicates are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn replicate_rng(seed: u64, replicate: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Uniform on (0, 1].
#[inline]
pub(crate) fn open_uniform(rng: &mut StreamRng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Standard exponential variate.
#[inline]
pub(crate) fn standard_exponential(rng: &mut StreamRng) -> f64 {
    -open_uniform(rng).ln()
}
