//! Noise-adjusted zero-order optimization.
//!
//! [`solvers::Stars`] is a Gaussian random search whose finite-difference
//! stepsize is chosen from the noise level, for additive and multiplicative
//! (relative) noise. Alongside it are the baseline solvers it is compared
//! against, closed-form bound calculators ([`theory`]), sample-based
//! estimators for the problem constants ([`estimation`]) and a seeded,
//! reproducible experiment harness ([`harness`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimation;
pub mod harness;
pub mod noise;
pub mod problems;
pub mod rng;
pub mod solvers;
pub mod theory;
pub mod vector;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use noise::{NoiseKind, NoiseModel, NoisyOracle};
pub use problems::{Objective, ProblemSpec};
pub use rng::{Lane, RngStream};
pub use solvers::{run, Record, SolverConfig, SolverKind, SolverParams, Trajectory};
pub use vector::Vector;
