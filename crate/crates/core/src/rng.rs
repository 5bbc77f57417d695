//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, lane)` and positioned
//! on ChaCha stream `stream_id`. The lane separates the consumers inside one
//! trial (noise draws, search directions, estimator probes) so that none of
//! them can perturb another's sequence.
//!
//! Uniforms take the top 53 bits of a `u64` draw. Normals use the Box-Muller
//! transform: each pair of uniforms `(u1, u2)` yields `r cos(θ)` followed by
//! `r sin(θ)`, with `r = sqrt(-2 ln(1 - u1))` and `θ = 2π u2`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{invalid, Result};
use crate::vector::Vector;

/// Consumer lanes within a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lane {
    Noise = 0,
    Directions = 1,
    Estimation = 2,
}

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl RngStream {
    /// A stream on the noise lane.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::with_lane(seed, stream_id, Lane::Noise)
    }

    pub fn with_lane(seed: u64, stream_id: u64, lane: Lane) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&(lane as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller (see module docs).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        // 1 - u1 lies in (0, 1], so the log is finite.
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// `n` i.i.d. standard-normal components.
pub fn gaussian_vector(rng: &mut RngStream, n: usize) -> Result<Vector> {
    if n == 0 {
        return Err(invalid("gaussian_vector requires n >= 1"));
    }
    Ok(Vector::from_raw((0..n).map(|_| rng.standard_normal()).collect()))
}

/// Uniform noise on `[-sqrt(3) sigma, sqrt(3) sigma]`, which has mean zero and
/// variance `sigma^2`.
pub fn uniform_noise(rng: &mut RngStream, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("noise sigma must be finite and >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let half_width = 3f64.sqrt() * sigma;
    Ok(half_width * (2.0 * rng.uniform() - 1.0))
}
