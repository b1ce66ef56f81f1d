//! Deterministic sharded hit-or-miss Monte Carlo.
//!
//! Work is split into a fixed number of shards regardless of worker
//! count; shard s draws from ChaCha8 stream s+1 of the base seed
//! (`seed_from_u64(seed)` then `set_stream`). Hit counts are integers, so
//! the combined estimate is byte-identical for any `--workers` value; the
//! worker count only changes wall-clock time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const SHARDS: u64 = 256;

/// Axis-aligned sampling box.
#[derive(Debug, Clone)]
pub struct AmbientBox {
    pub lows: Vec<f64>,
    pub highs: Vec<f64>,
}

impl AmbientBox {
    pub fn unit_cube(n: usize) -> Self {
        Self {
            lows: vec![0.0; n],
            highs: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lows.len()
    }

    pub fn volume(&self) -> f64 {
        self.lows
            .iter()
            .zip(&self.highs)
            .map(|(l, h)| h - l)
            .product()
    }

    fn sample_into(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for ((x, l), h) in out.iter_mut().zip(&self.lows).zip(&self.highs) {
            *x = l + rng.random::<f64>() * (h - l);
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
}

/// Hit-or-miss volume estimate of `{x in ambient : predicate(x)}` with the
/// binomial standard error, both scaled by the ambient volume.
pub fn hit_or_miss<F>(
    ambient: &AmbientBox,
    predicate: F,
    samples: u64,
    seed: u64,
    workers: usize,
) -> McEstimate
where
    F: Fn(&[f64]) -> bool + Sync,
{
    assert!(samples > 0, "sample count must be positive");
    let shards = SHARDS.min(samples);
    let shard_hits = |shard: u64| -> u64 {
        let base = samples / shards;
        let count = base + u64::from(shard < samples % shards);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shard + 1);
        let mut x = vec![0.0; ambient.dim()];
        let mut hits = 0;
        for _ in 0..count {
            ambient.sample_into(&mut rng, &mut x);
            if predicate(&x) {
                hits += 1;
            }
        }
        hits
    };

    let hits: u64 = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..shards).into_par_iter().map(shard_hits).sum())
    } else {
        (0..shards).map(shard_hits).sum()
    };

    let p = hits as f64 / samples as f64;
    let volume = ambient.volume();
    McEstimate {
        estimate: p * volume,
        std_error: (p * (1.0 - p) / samples as f64).sqrt() * volume,
        samples,
        hits,
    }
}
