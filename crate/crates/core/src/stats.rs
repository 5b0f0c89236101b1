//! Monte Carlo bookkeeping: running moments, Wilson intervals and a
//! deterministic chunked parallel map over RNG substreams.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::RngStream;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl EstimatorResult {
    /// Normal-approximation interval from running moments.
    pub fn from_moments(m: &Moments) -> Self {
        let se = m.stderr();
        EstimatorResult {
            n: m.n,
            mean: m.mean,
            stderr: se,
            ci_low: m.mean - Z95 * se,
            ci_high: m.mean + Z95 * se,
        }
    }

    /// Binomial proportion with a Wilson score interval.
    pub fn from_counts(successes: u64, n: u64) -> Self {
        if n == 0 {
            return EstimatorResult {
                n,
                mean: f64::NAN,
                stderr: f64::NAN,
                ci_low: 0.0,
                ci_high: 1.0,
            };
        }
        let p = successes as f64 / n as f64;
        let (lo, hi) = wilson_interval(successes, n, Z95);
        EstimatorResult {
            n,
            mean: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            ci_low: lo,
            ci_high: hi,
        }
    }

    /// Multiplies mean, stderr and interval by `s >= 0`.
    pub fn scaled(&self, s: f64) -> Self {
        EstimatorResult {
            n: self.n,
            mean: self.mean * s,
            stderr: self.stderr * s,
            ci_low: self.ci_low * s,
            ci_high: self.ci_high * s,
        }
    }

    /// `|mean - target| <= k * stderr + abs_slack`.
    pub fn agrees_with(&self, target: f64, k: f64, abs_slack: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr + abs_slack
    }
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes as f64 == n {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// Welford accumulator with an exact-order merge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.n as f64 * w;
        self.n = n;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.m2 / (self.n - 1) as f64
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Default number of samples handed to one substream.
pub const CHUNK: u64 = 1024;

/// Splits `n` samples into chunks of `chunk`, runs `f(rng_k, count_k)` on
/// substream `k` of `rng` in parallel and returns the results in chunk order.
///
/// The output depends only on `rng`, `n` and `chunk`, never on the thread count.
pub fn chunked_map<T, F>(rng: &RngStream, n: u64, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream, u64) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = n.div_ceil(chunk);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = chunk.min(n - k * chunk);
            let mut r = rng.substream(k);
            f(&mut r, count)
        })
        .collect()
}

/// Monte Carlo mean of `f` over `n` draws.
pub fn mc_mean<F>(rng: &RngStream, n: u64, f: F) -> EstimatorResult
where
    F: Fn(&mut RngStream) -> f64 + Sync + Send,
{
    let parts = chunked_map(rng, n, CHUNK, |r, count| {
        let mut m = Moments::new();
        for _ in 0..count {
            m.push(f(r));
        }
        m
    });
    let mut total = Moments::new();
    for p in &parts {
        total.merge(p);
    }
    EstimatorResult::from_moments(&total)
}

/// Monte Carlo frequency of the event `f` over `n` draws.
pub fn mc_frequency<F>(rng: &RngStream, n: u64, f: F) -> EstimatorResult
where
    F: Fn(&mut RngStream) -> bool + Sync + Send,
{
    let hits: u64 = chunked_map(rng, n, CHUNK, |r, count| (0..count).filter(|_| f(r)).count() as u64)
        .iter()
        .sum();
    EstimatorResult::from_counts(hits, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.2 && hi < 0.35);
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!((hi - 0.596_17).abs() < 1e-4);
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut one = Moments::new();
        xs.iter().for_each(|x| one.push(*x));
        let mut a = Moments::new();
        let mut b = Moments::new();
        xs[..313].iter().for_each(|x| a.push(*x));
        xs[313..].iter().for_each(|x| b.push(*x));
        a.merge(&b);
        assert_eq!(a.n, one.n);
        assert!((a.mean - one.mean).abs() < 1e-12);
        assert!((a.variance() - one.variance()).abs() < 1e-10);
    }

    #[test]
    fn chunked_map_is_thread_count_independent() {
        let rng = RngStream::new(7, 0);
        let run = || mc_mean(&rng, 5000, |r| r.uniform());
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
        assert!(a.agrees_with(0.5, 4.0, 0.0));
    }
}
