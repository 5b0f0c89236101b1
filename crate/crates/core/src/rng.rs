//! Reproducible random streams.
//!
//! Every Monte Carlo task owns its own [`RngStream`], derived from a parent
//! by index, so results never depend on how tasks are scheduled.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream number `index`. Depends only on `(seed, stream_id, index)`,
    /// never on how many draws the parent has made.
    pub fn substream(&self, index: u64) -> RngStream {
        let child_seed = splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(1)));
        RngStream::new(child_seed, index)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian: real and imaginary parts N(0, 1/2), so E|z|^2 = 1.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let mut a = RngStream::new(42, 3);
        let mut b = RngStream::new(42, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RngStream::new(42, 3);
        let mut b = RngStream::new(42, 4);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn substream_ignores_parent_position() {
        let parent = RngStream::new(9, 1);
        let mut advanced = parent.clone();
        advanced.uniform();
        let mut x = parent.substream(17);
        let mut y = advanced.substream(17);
        assert_eq!(x.next_u64(), y.next_u64());
    }

    #[test]
    fn complex_gaussian_unit_variance() {
        let mut r = RngStream::new(1, 0);
        let n = 200_000;
        let m: f64 = (0..n).map(|_| r.complex_gaussian().norm_sqr()).sum::<f64>() / n as f64;
        assert!((m - 1.0).abs() < 0.01, "{m}");
    }
}
