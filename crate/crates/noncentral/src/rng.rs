//! Seeded, stream-splittable random number generation.
//!
//! All stochastic checks in this crate are deterministic given a
//! `(seed, stream)` pair. Parallel or logically independent consumers take
//! distinct stream ids off the same seed.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic generator keyed by a 64-bit seed and a stream id.
#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng { inner }
    }

    /// Derive an independent generator for a sub-task.
    pub fn substream(&self, seed: u64, stream: u64) -> Self {
        Rng::new(seed, stream)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via the Box-Muller transform (one value per pair of
    /// uniforms; the sine branch is discarded to keep draws independent of
    /// call history).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Exponential with mean 1, by inversion.
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}
