//! Deterministic sharded Monte-Carlo accumulation.
//!
//! Samples are split into fixed-size shards; shard k draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream k. Shards run in parallel and
//! are merged in shard order, so results depend only on (n, seed).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const SHARD_SIZE: usize = 4096;

/// Running sums for several channels observed on the same samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub n: usize,
    pub sum: Vec<f64>,
    pub sum_sq: Vec<f64>,
}

impl Moments {
    pub fn new(channels: usize) -> Self {
        Self { n: 0, sum: vec![0.0; channels], sum_sq: vec![0.0; channels] }
    }

    fn push(&mut self, v: &[f64]) {
        self.n += 1;
        for (k, x) in v.iter().enumerate() {
            self.sum[k] += x;
            self.sum_sq[k] += x * x;
        }
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        for k in 0..self.sum.len() {
            self.sum[k] += o.sum[k];
            self.sum_sq[k] += o.sum_sq[k];
        }
    }

    pub fn mean(&self, k: usize) -> f64 {
        self.sum[k] / self.n as f64
    }

    /// Standard error of the mean of channel k.
    pub fn stderr(&self, k: usize) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        let n = self.n as f64;
        let m = self.mean(k);
        let var = ((self.sum_sq[k] - n * m * m) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn estimate(&self, k: usize) -> McEstimate {
        McEstimate { estimate: self.mean(k), stderr: self.stderr(k), n: self.n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Run `sample` n times, each call filling one value per channel.
pub fn sharded<F>(n: usize, seed: u64, channels: usize, sample: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let shards = n.div_ceil(SHARD_SIZE);
    let parts: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = SHARD_SIZE.min(n - k * SHARD_SIZE);
            let mut acc = Moments::new(channels);
            let mut buf = vec![0.0; channels];
            for _ in 0..count {
                sample(&mut rng, &mut buf);
                acc.push(&buf);
            }
            acc
        })
        .collect();
    let mut total = Moments::new(channels);
    for p in &parts {
        total.merge(p);
    }
    total
}
