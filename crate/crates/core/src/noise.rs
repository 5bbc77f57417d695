//! Noise models and the noisy evaluation oracle.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::problems::ProblemSpec;
use crate::rng::{uniform_noise, RngStream};

/// Largest admissible relative noise level: the uniform support
/// `sqrt(3) sigma` must stay below 1.
pub const MAX_RELATIVE_SIGMA: f64 = 0.577_350_269_189_625_8; // 3^{-1/2}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    Additive,
    Multiplicative,
}

impl NoiseKind {
    pub fn short_name(self) -> &'static str {
        match self {
            NoiseKind::Additive => "add",
            NoiseKind::Multiplicative => "mult",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" | "additive" => Ok(NoiseKind::Additive),
            "mult" | "multiplicative" | "rel" | "relative" => Ok(NoiseKind::Multiplicative),
            other => Err(invalid(format!("unknown noise kind `{other}` (expected add or mult)"))),
        }
    }
}

/// Uniform noise `nu ~ U[-sqrt(3) sigma, sqrt(3) sigma]`, entering either as
/// `f + nu` or `f (1 + nu)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub sigma: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, sigma: f64) -> Result<Self> {
        let model = Self { kind, sigma };
        model.validate()?;
        Ok(model)
    }

    pub fn additive(sigma: f64) -> Result<Self> {
        Self::new(NoiseKind::Additive, sigma)
    }

    pub fn multiplicative(sigma: f64) -> Result<Self> {
        Self::new(NoiseKind::Multiplicative, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(invalid(format!("noise sigma must be finite and >= 0, got {}", self.sigma)));
        }
        if self.kind == NoiseKind::Multiplicative && self.sigma >= MAX_RELATIVE_SIGMA {
            return Err(Error::ConfigRejected(format!(
                "multiplicative sigma {} >= 3^(-1/2): noise support reaches -1",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// The only gateway to noisy function values. Every call to
/// [`NoisyOracle::eval`] draws fresh noise and increments the counter by one.
#[derive(Clone, Debug)]
pub struct NoisyOracle {
    problem: ProblemSpec,
    noise: NoiseModel,
    rng: RngStream,
    eval_count: u64,
}

impl NoisyOracle {
    pub fn new(problem: ProblemSpec, noise: NoiseModel, rng: RngStream) -> Result<Self> {
        noise.validate()?;
        Ok(Self {
            problem,
            noise,
            rng,
            eval_count: 0,
        })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    /// Noisy value `f~(x; xi)` with a fresh `xi`.
    pub fn eval(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.problem.n {
            return Err(invalid(format!(
                "point has dimension {}, problem `{}` has {}",
                x.len(),
                self.problem.name,
                self.problem.n
            )));
        }
        let f = self.problem.eval(x);
        let nu = uniform_noise(&mut self.rng, self.noise.sigma)?;
        self.eval_count += 1;
        Ok(match self.noise.kind {
            NoiseKind::Additive => f + nu,
            NoiseKind::Multiplicative => f * (1.0 + nu),
        })
    }

    /// Noise-free value for logging. Touches neither the counter nor the
    /// random stream.
    pub fn true_value(&self, x: &[f64]) -> f64 {
        self.problem.eval(x)
    }
}
