//! Query latency harness: one warm-up pass, then timed passes over the same
//! shuffled queries.

use std::hint::black_box;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::KeySet;

pub const DEFAULT_QUERIES: usize = 1_000_000;
pub const DEFAULT_RUNS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchResult {
    pub queries: usize,
    pub runs: usize,
    /// Mean over runs of the average latency per query, in nanoseconds.
    pub mean_ns: f64,
    pub std_ns: f64,
}

/// `n` member indices drawn uniformly with replacement, in random order.
pub fn sample_queries<K: KeySet + ?Sized>(keys: &K, n: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<u32> = (0..n).map(|_| rng.gen_range(0..keys.len()) as u32).collect();
    q.shuffle(&mut rng);
    q
}

/// Times `f` over the queries `runs` times after one untimed pass.
pub fn measure<K, F>(keys: &K, queries: &[u32], runs: usize, mut f: F) -> BenchResult
where
    K: KeySet + ?Sized,
    F: FnMut(&[u8]) -> u64,
{
    let mut pass = || {
        let start = Instant::now();
        let mut acc = 0u64;
        for &i in queries {
            acc = acc.wrapping_add(f(black_box(keys.key(i as usize))));
        }
        black_box(acc);
        start.elapsed().as_nanos() as f64 / queries.len().max(1) as f64
    };
    pass();
    let times: Vec<f64> = (0..runs).map(|_| pass()).collect();
    let mean = times.iter().sum::<f64>() / runs.max(1) as f64;
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / runs.max(1) as f64;
    BenchResult {
        queries: queries.len(),
        runs,
        mean_ns: mean,
        std_ns: var.sqrt(),
    }
}
