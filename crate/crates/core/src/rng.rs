//! Seeding and random streams.
//!
//! Everything random in the crate is a pure function of a 64-bit seed:
//!
//! * streams: ChaCha8 keyed by `seed` (expanded with `seed_from_u64`) with the
//!   ChaCha stream id selecting an independent sub-sequence, so `(seed, stream)`
//!   addresses a reproducible, platform independent sequence;
//! * per-edge uniforms and derived seeds: the SplitMix64 finaliser, a
//!   bijection on `u64`, chained over the inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for replicate/grid point `index` under `master`. Injective in `index`
/// for a fixed master.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(splitmix64(index)))
}

/// Independent random stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[0, 1)` attached to the edge `{i, j}` (order-independent).
#[inline]
pub fn edge_uniform(seed: u64, i: i64, j: i64) -> f64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    let h = splitmix64(splitmix64(splitmix64(seed) ^ a as u64) ^ b as u64);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Runs `f` on `n` replicates in parallel. Replicate `r` receives
/// `derive_seed(seed, r)`; results come back in replicate order, so any
/// sequential reduction over them is independent of the thread count.
pub fn replicates<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n as u64)
        .into_par_iter()
        .map(|r| f(derive_seed(seed, r)))
        .collect()
}
