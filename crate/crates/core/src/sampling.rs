//! Deterministic sampling for probes and random test vectors.
//!
//! All draws come from SplitMix64 with its state initialised to the seed, so
//! every sample sequence is reproducible from the seed alone.

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)` from the top 53 bits of one output.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform index in `0..n` as `⌊r·n / 2^64⌋`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.rng.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Entries uniform in `[−1, 1)`.
    pub fn real_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform(-1.0, 1.0)).collect()
    }

    /// Real and imaginary parts uniform in `[−1, 1)`.
    pub fn complex_vector(&mut self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| {
                let re = self.uniform(-1.0, 1.0);
                Complex64::new(re, self.uniform(-1.0, 1.0))
            })
            .collect()
    }

    /// A point of the cube `[−π, π]^d`.
    pub fn cube_point(&mut self, dim: usize) -> Vec<f64> {
        (0..dim)
            .map(|_| self.uniform(-std::f64::consts::PI, std::f64::consts::PI))
            .collect()
    }
}
