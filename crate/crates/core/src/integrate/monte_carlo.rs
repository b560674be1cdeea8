//! Deterministic parallel Monte Carlo against Gaussian product measures.
//!
//! Sampling is split into fixed-size batches; batch `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `b`, so the stream of
//! samples — and therefore every estimate — is identical regardless of how many
//! worker threads Rayon schedules. Batch results are collected in batch order and
//! reduced with compensated summation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::integrate::{Estimate, KahanSum};
use crate::measures::GaussianProduct;

/// Fixed batch size; a power of two so sample counts split evenly in benchmarks.
const BATCH: u64 = 1 << 14;

/// Estimates `∫ f dμ` from `n` samples. `stderr` is the sample standard error
/// `s / sqrt(n)`; with one sample it is reported as infinite.
pub fn mc_estimate(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    mu: &GaussianProduct,
    n: u64,
    seed: u64,
) -> Estimate {
    assert!(n >= 1, "sample count must be >= 1");
    let sigmas: Vec<f64> = mu.variances().iter().map(|v| v.sqrt()).collect();
    let num_batches = n.div_ceil(BATCH);
    let partials: Vec<(f64, f64)> = (0..num_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BATCH.min(n - b * BATCH);
            let mut x = vec![0.0f64; sigmas.len()];
            let mut sum = 0.0f64;
            let mut sum_sq = 0.0f64;
            for _ in 0..count {
                for (xi, sigma) in x.iter_mut().zip(&sigmas) {
                    let z: f64 = rng.sample(StandardNormal);
                    *xi = sigma * z;
                }
                let v = f(&x);
                sum += v;
                sum_sq += v * v;
            }
            (sum, sum_sq)
        })
        .collect();
    let mut total = KahanSum::default();
    let mut total_sq = KahanSum::default();
    for (s, s2) in partials {
        total.add(s);
        total_sq.add(s2);
    }
    let nf = n as f64;
    let mean = total.value() / nf;
    if n == 1 {
        return Estimate {
            value: mean,
            stderr: f64::INFINITY,
        };
    }
    let var = ((total_sq.value() - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Estimate {
        value: mean,
        stderr: (var / nf).sqrt(),
    }
}
