//! Closed-form smoothing stepsizes, step lengths, error bounds, iteration
//! budgets and accuracy floors for additive and multiplicative noise.
//!
//! Every function is pure. Arguments are validated and rejected with
//! [`Error::InvalidArgument`] where a formula would degenerate.

use crate::error::{invalid, Result};
use crate::noise::MAX_RELATIVE_SIGMA;

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn require_dim(n: usize) -> Result<f64> {
    if n == 0 {
        Err(invalid("dimension n must be >= 1"))
    } else {
        Ok(n as f64)
    }
}

fn require_relative_sigma(sigma_r: f64) -> Result<()> {
    if sigma_r > 0.0 && sigma_r < MAX_RELATIVE_SIGMA {
        Ok(())
    } else {
        Err(invalid(format!("relative sigma must lie in (0, 3^(-1/2)), got {sigma_r}")))
    }
}

/// Noise-optimal forward-difference stepsize under additive noise,
/// `[8 sigma_a^2 n / (L1^2 (n+6)^3)]^(1/4)`. Independent of `x`.
pub fn mu_star_additive(sigma_a: f64, l1: f64, n: usize) -> Result<f64> {
    require_positive("sigma_a", sigma_a)?;
    require_positive("L1", l1)?;
    let n = require_dim(n)?;
    Ok((8.0 * sigma_a * sigma_a * n / (l1 * l1 * (n + 6.0).powi(3))).powf(0.25))
}

/// Upper bound on the expected squared error of the noisy forward-difference
/// directional derivative:
/// `mu^2 L1^2 (n+6)^3 / 4 + 2 sigma_a^2 n / mu^2`.
pub fn fd_error_bound_additive(mu: f64, sigma_a: f64, l1: f64, n: usize) -> Result<f64> {
    let (smoothing, noise) = fd_error_bound_terms(mu, sigma_a, l1, n)?;
    Ok(smoothing + noise)
}

/// The two summands of [`fd_error_bound_additive`]: (smoothing bias, noise).
pub fn fd_error_bound_terms(mu: f64, sigma_a: f64, l1: f64, n: usize) -> Result<(f64, f64)> {
    require_positive("mu", mu)?;
    require_positive("sigma_a", sigma_a)?;
    require_positive("L1", l1)?;
    let n = require_dim(n)?;
    Ok((
        mu * mu * l1 * l1 * (n + 6.0).powi(3) / 4.0,
        2.0 * sigma_a * sigma_a * n / (mu * mu),
    ))
}

/// Minimum of [`fd_error_bound_additive`]: `sqrt(2) L1 sigma_a sqrt(n (n+6)^3)`.
pub fn fd_error_bound_at_optimum(sigma_a: f64, l1: f64, n: usize) -> Result<f64> {
    require_positive("sigma_a", sigma_a)?;
    require_positive("L1", l1)?;
    let n = require_dim(n)?;
    Ok(std::f64::consts::SQRT_2 * l1 * sigma_a * (n * (n + 6.0).powi(3)).sqrt())
}

/// Fixed step length `1 / (4 L1 (n+4))`.
pub fn step_length(l1: f64, n: usize) -> f64 {
    1.0 / (4.0 * l1 * (n as f64 + 4.0))
}

/// Best accuracy guaranteed under additive noise, `6 sqrt(2) sigma_a (n+4) / 5`.
pub fn eps_pred_additive(sigma_a: f64, n: usize) -> f64 {
    6.0 * std::f64::consts::SQRT_2 * sigma_a * (n as f64 + 4.0) / 5.0
}

/// Iterations needed for accuracy `eps`: `ceil(8 (n+4) L1 R2 / eps - 1)`,
/// floored at zero.
pub fn iteration_budget_additive(n: usize, l1: f64, r2: f64, eps: f64) -> Result<u64> {
    require_positive("eps", eps)?;
    let raw = 8.0 * (n as f64 + 4.0) * l1 * r2 / eps - 1.0;
    if !raw.is_finite() {
        return Err(invalid("iteration budget overflows"));
    }
    Ok(raw.ceil().max(0.0) as u64)
}

/// Coefficient of the multiplicative-noise stepsize `mu = C4 sqrt(|f(x)|)`:
/// `[16 sigma_r^2 n / (L1^2 (1 + 3 sigma_r^2) (n+6)^3)]^(1/4)`.
pub fn c4(sigma_r: f64, l1: f64, n: usize) -> Result<f64> {
    require_relative_sigma(sigma_r)?;
    require_positive("L1", l1)?;
    let n = require_dim(n)?;
    let s2 = sigma_r * sigma_r;
    Ok((16.0 * s2 * n / (l1 * l1 * (1.0 + 3.0 * s2) * (n + 6.0).powi(3))).powf(0.25))
}

/// Default lower bound for [`mu_tilde`].
pub const DEFAULT_MU_MIN: f64 = 1e-12;

/// Estimated multiplicative-noise stepsize `max(C4 sqrt(|f~|), mu_min)`.
pub fn mu_tilde(c4: f64, f_noisy: f64, mu_min: f64) -> f64 {
    (c4 * f_noisy.abs().sqrt()).max(mu_min)
}

/// `E[1 / (1 + nu)]` for `nu ~ U[-a, a]`, `a = sqrt(3) sigma_r`:
/// `ln((1+a)/(1-a)) / (2a)`, equal to 1 at `sigma_r = 0`.
pub fn snr_bound_uniform(sigma_r: f64) -> Result<f64> {
    if !(0.0..MAX_RELATIVE_SIGMA).contains(&sigma_r) {
        return Err(invalid(format!("relative sigma must lie in [0, 3^(-1/2)), got {sigma_r}")));
    }
    if sigma_r == 0.0 {
        return Ok(1.0);
    }
    let a = 3f64.sqrt() * sigma_r;
    // atanh(a) / a == ln((1+a)/(1-a)) / (2a), but without cancellation for small a.
    Ok(a.atanh() / a)
}

/// `C9 = (3 sqrt(3) / 8)(2b + 7) M + 3 L0^2 / (2 L1)`.
pub fn c9(b: f64, m: f64, l0: f64, l1: f64) -> f64 {
    3.0 * 3f64.sqrt() / 8.0 * (2.0 * b + 7.0) * m + 3.0 * l0 * l0 / (2.0 * l1)
}

/// Best accuracy guaranteed under multiplicative noise,
/// `C9 (sigma_r^2 + 1/6)(n+4)`.
pub fn eps_pred_multiplicative(sigma_r: f64, n: usize, b: f64, m: f64, l0: f64, l1: f64) -> Result<f64> {
    if !(sigma_r >= 0.0) {
        return Err(invalid("relative sigma must be >= 0"));
    }
    if !(b >= 1.0) {
        return Err(invalid(format!("signal-to-noise bound b must be >= 1, got {b}")));
    }
    require_positive("M", m)?;
    require_positive("L0", l0)?;
    require_positive("L1", l1)?;
    Ok(c9(b, m, l0, l1) * (sigma_r * sigma_r + 1.0 / 6.0) * (n as f64 + 4.0))
}

/// Largest admissible `sigma_r^2` for a target accuracy,
/// `eps / (C9 (n+4)) - 1/6`. Returned verbatim; a non-positive value means no
/// relative noise level can guarantee `eps`, which is flagged rather than
/// clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeNoiseAllowance {
    pub sigma_r_sq: f64,
    pub feasible: bool,
}

pub fn relative_noise_allowance(eps: f64, n: usize, c9: f64) -> RelativeNoiseAllowance {
    let sigma_r_sq = eps / (c9 * (n as f64 + 4.0)) - 1.0 / 6.0;
    RelativeNoiseAllowance {
        sigma_r_sq,
        feasible: sigma_r_sq > 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdditiveConstants {
    pub c1: f64,
    pub c2: f64,
    /// Upper bound `3 sqrt(2) sigma_a / (20 L1)` on the per-step drift constant.
    pub c3_bound: f64,
}

pub fn constants_additive(sigma_a: f64, l1: f64, n: usize) -> Result<AdditiveConstants> {
    let c1 = fd_error_bound_at_optimum(sigma_a, l1, n)?;
    Ok(AdditiveConstants {
        c1,
        c2: 2.0 * c1,
        c3_bound: 3.0 * std::f64::consts::SQRT_2 * sigma_a / (20.0 * l1),
    })
}

/// The drift constant before bounding:
/// `sqrt(2) sigma_a g1(n) / (2 L1)` with
/// `g1(n) = sqrt(n (n+6)^3) / (4 (n+4)^2) + sqrt(n^3 / (n+6)^3) / (n+4)`.
pub fn c3_exact(sigma_a: f64, l1: f64, n: usize) -> Result<f64> {
    require_positive("sigma_a", sigma_a)?;
    require_positive("L1", l1)?;
    let n = require_dim(n)?;
    let g1 = (n * (n + 6.0).powi(3)).sqrt() / (4.0 * (n + 4.0).powi(2))
        + (n.powi(3) / (n + 6.0).powi(3)).sqrt() / (n + 4.0);
    Ok(std::f64::consts::SQRT_2 * sigma_a * g1 / (2.0 * l1))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplicativeConstants {
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    /// `3 L0^2 sigma_r^2 / (16 L1^2)`, algebraically equal to `c8`.
    pub c8_simplified: f64,
    /// `3 sqrt(3) (2b+7)(sigma_r^2 + 1/6) / (64 L1)`, an upper bound on `c7`.
    pub c7_bound: f64,
}

pub fn constants_multiplicative(sigma_r: f64, b: f64, l0: f64, l1: f64, n: usize) -> Result<MultiplicativeConstants> {
    if !(b >= 1.0) {
        return Err(invalid(format!("signal-to-noise bound b must be >= 1, got {b}")));
    }
    require_positive("L0", l0)?;
    let c4 = c4(sigma_r, l1, n)?;
    let nf = n as f64;
    let s2 = sigma_r * sigma_r;
    let cube = (nf + 6.0).powi(3);
    let c5 = 0.5 * c4 * c4 * l1 * l1 * cube + (1.0 + b) * l1 * sigma_r * ((1.0 + 3.0 * s2) * nf * cube).sqrt();
    let c6 = 3.0 * l0 * l0 * s2 * (nf + 4.0).powi(2);
    let denom = 16.0 * l1 * l1 * (nf + 4.0).powi(2);
    let c7 = c4 * c4 * nf / (4.0 * (nf + 4.0)) + c5 / denom;
    let c8 = c6 / denom;
    Ok(MultiplicativeConstants {
        c4,
        c5,
        c6,
        c7,
        c8,
        c8_simplified: 3.0 * l0 * l0 * s2 / (16.0 * l1 * l1),
        c7_bound: 3.0 * 3f64.sqrt() * (2.0 * b + 7.0) * (s2 + 1.0 / 6.0) / (64.0 * l1),
    })
}

/// Smoothing stepsize of the accuracy-targeted random search,
/// `5 / (3 (n+4)) sqrt(eps / (2 L1))`.
pub fn rg_mu(epsilon: f64, l1: f64, n: usize) -> Result<f64> {
    require_positive("epsilon", epsilon)?;
    require_positive("L1", l1)?;
    Ok(5.0 / (3.0 * (n as f64 + 4.0)) * (epsilon / (2.0 * l1)).sqrt())
}

/// Step length of the stochastic random search, `R / ((n+4) sqrt(N+1) L0)`.
pub fn ss_step_length(r: f64, n: usize, iterations: u64, l0: f64) -> Result<f64> {
    require_positive("R", r)?;
    require_positive("L0", l0)?;
    Ok(r / ((n as f64 + 4.0) * ((iterations + 1) as f64).sqrt() * l0))
}

/// Smoothing stepsize of the stochastic random search, `eps / (2 L0 sqrt(n))`.
pub fn ss_mu(epsilon: f64, l0: f64, n: usize) -> Result<f64> {
    require_positive("epsilon", epsilon)?;
    require_positive("L0", l0)?;
    let n = require_dim(n)?;
    Ok(epsilon / (2.0 * l0 * n.sqrt()))
}

/// Diameter proxy for the gradient-free stochastic method.
///
/// The nominal `sqrt(2 f(x0) / L1)` vanishes when `f(x0) <= 0`. When `r2` is
/// known the result is `max(sqrt(2 max(f0, 0) / L1), sqrt(r2))`; otherwise the
/// nominal value, or 1 if it is zero.
pub fn rsgf_diameter(l1_est: f64, f0: f64, r2: Option<f64>) -> f64 {
    let nominal = (2.0 * f0.max(0.0) / l1_est).sqrt();
    match r2 {
        Some(r2) if r2 > 0.0 => nominal.max(r2.sqrt()),
        _ if nominal > 0.0 => nominal,
        _ => 1.0,
    }
}

/// Step length `(1/sqrt(n+4)) min{1/(4 L1 sqrt(n+4)), D / (sigma sqrt(N))}`.
pub fn rsgf_gamma(l1_est: f64, sigma_est: f64, f0: f64, n: usize, iterations: u64, r2: Option<f64>) -> Result<f64> {
    require_positive("L1 estimate", l1_est)?;
    require_positive("sigma estimate", sigma_est)?;
    if iterations == 0 {
        return Err(invalid("RSGF needs an iteration count N >= 1"));
    }
    let root = (n as f64 + 4.0).sqrt();
    let d = rsgf_diameter(l1_est, f0, r2);
    let first = 1.0 / (4.0 * l1_est * root);
    let second = d / (sigma_est * (iterations as f64).sqrt());
    Ok(first.min(second) / root)
}

/// Everything the bound calculators produce for one (problem, noise) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoryBounds {
    pub noise: crate::noise::NoiseKind,
    pub sigma: f64,
    pub n: usize,
    /// `mu*` for additive noise, `C4` for multiplicative noise.
    pub mu_coefficient: f64,
    pub h: f64,
    pub eps_pred: f64,
    pub iterations: u64,
    /// Named constants in presentation order.
    pub constants: Vec<(&'static str, f64)>,
}

impl TheoryBounds {
    pub fn additive(sigma_a: f64, l1: f64, n: usize, r2: f64) -> Result<Self> {
        let mu = mu_star_additive(sigma_a, l1, n)?;
        let eps = eps_pred_additive(sigma_a, n);
        let k = constants_additive(sigma_a, l1, n)?;
        Ok(Self {
            noise: crate::noise::NoiseKind::Additive,
            sigma: sigma_a,
            n,
            mu_coefficient: mu,
            h: step_length(l1, n),
            eps_pred: eps,
            iterations: iteration_budget_additive(n, l1, r2, eps)?,
            constants: vec![("C1", k.c1), ("C2", k.c2), ("C3", k.c3_bound)],
        })
    }

    /// `m` is the bound on the average `|f(x_k)|` along the run.
    pub fn multiplicative(sigma_r: f64, l0: f64, l1: f64, n: usize, r2: f64, m: f64) -> Result<Self> {
        let b = snr_bound_uniform(sigma_r)?;
        let k = constants_multiplicative(sigma_r, b, l0, l1, n)?;
        let eps = eps_pred_multiplicative(sigma_r, n, b, m, l0, l1)?;
        let c9 = c9(b, m, l0, l1);
        Ok(Self {
            noise: crate::noise::NoiseKind::Multiplicative,
            sigma: sigma_r,
            n,
            mu_coefficient: k.c4,
            h: step_length(l1, n),
            eps_pred: eps,
            iterations: iteration_budget_additive(n, l1, r2, eps)?,
            constants: vec![
                ("b", b),
                ("M", m),
                ("C4", k.c4),
                ("C5", k.c5),
                ("C6", k.c6),
                ("C7", k.c7),
                ("C8", k.c8),
                ("C9", c9),
            ],
        })
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn mu_star_values_and_scaling() {
        assert!(rel(mu_star_additive(1.0, 1.0, 2).unwrap(), 0.420_448_207_626_857_3) < 1e-12);
        assert!(rel(mu_star_additive(1e-3, 4.0, 8).unwrap(), 6.179_011_038_674_443_6e-3) < 1e-12);
        let a = mu_star_additive(1e-4, 4.0, 8).unwrap();
        let b = mu_star_additive(16e-4, 4.0, 8).unwrap();
        assert!(rel(b, 4.0 * a) < 1e-14);
        assert!(mu_star_additive(0.0, 4.0, 8).is_err());
    }

    #[test]
    fn fd_bound_terms_balance_at_optimum() {
        let mu = mu_star_additive(1e-3, 4.0, 8).unwrap();
        let (s, n) = fd_error_bound_terms(mu, 1e-3, 4.0, 8).unwrap();
        assert!(rel(s, n) < 1e-12);
        assert!(rel(s + n, 0.838_131_254_637_362_9) < 1e-12);
        assert!(fd_error_bound_additive(0.0, 1e-3, 4.0, 8).is_err());
        let at = |f: f64| fd_error_bound_additive(f * mu, 1e-3, 4.0, 8).unwrap();
        for f in [0.5, 0.75, 1.5, 2.0] {
            assert!(at(f) > at(1.0));
        }
    }

    #[test]
    fn step_length_values() {
        assert_eq!(step_length(4.0, 8), 1.0 / 192.0);
        assert_eq!(step_length(1.0, 0), 1.0 / 16.0);
        assert_eq!(step_length(8.0, 8), step_length(4.0, 8) / 2.0);
    }

    #[test]
    fn eps_pred_additive_values() {
        assert!(rel(eps_pred_additive(1e-3, 8), 2.036_467_529_817_256_9e-2) < 1e-12);
        assert!(rel(eps_pred_additive(1e-6, 8), 2.036_467_529_817_256_9e-5) < 1e-12);
        assert!(rel(eps_pred_additive(1e-2, 32), 0.610_940_258_945_177_1) < 1e-12);
    }

    #[test]
    fn iteration_budget_values() {
        let eps = eps_pred_additive(1e-3, 8);
        assert_eq!(iteration_budget_additive(8, 4.0, 3.0, eps).unwrap(), 56568);
        assert_eq!(iteration_budget_additive(1, 1.0, 1.0, 40.0).unwrap(), 0);
        assert_eq!(iteration_budget_additive(1, 1.0, 1.0, 80.0).unwrap(), 0);
        // N + 1 doubles when eps halves
        assert_eq!(iteration_budget_additive(4, 2.0, 1.0, 1.0).unwrap() + 1, 128);
        assert_eq!(iteration_budget_additive(4, 2.0, 1.0, 0.5).unwrap() + 1, 256);
        assert!(iteration_budget_additive(8, 4.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn c4_values_and_limits() {
        assert!(rel(c4(1e-3, 4.0, 8).unwrap(), 7.348_118_379_789_417e-3) < 1e-12);
        assert!(c4(0.0, 4.0, 8).is_err());
        assert!(c4(0.6, 4.0, 8).is_err());
        let s = 1e-7;
        let ratio = (c4(s, 4.0, 8).unwrap() / mu_star_additive(s, 4.0, 8).unwrap()).powi(4);
        assert!((ratio - 2.0).abs() < 1e-9);
        let mut prev = f64::INFINITY;
        // n / (n+6)^3 peaks at n = 3
        for n in 3..=64 {
            let v = c4(1e-2, 4.0, n).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn mu_tilde_values() {
        assert!(rel(mu_tilde(0.00735, 0.444, 1e-12), 4.897_549_387_193_558e-3) < 1e-12);
        assert_eq!(mu_tilde(0.5, 0.0, 1e-12), 1e-12);
        assert_eq!(mu_tilde(0.5, 0.3, 1e-12), mu_tilde(0.5, -0.3, 1e-12));
    }

    #[test]
    fn snr_bound_values() {
        assert_eq!(snr_bound_uniform(0.0).unwrap(), 1.0);
        assert!(rel(snr_bound_uniform(0.1).unwrap(), 1.010_183_949_409_522_6) < 1e-13);
        let a2 = 3.0 * 1e-6;
        assert!(rel(snr_bound_uniform(1e-3).unwrap(), 1.0 + a2 / 3.0) < 1e-11);
        assert!(snr_bound_uniform(MAX_RELATIVE_SIGMA).is_err());
    }

    #[test]
    fn eps_pred_multiplicative_values() {
        let v = eps_pred_multiplicative(0.0, 8, 1.0, 1.0, 1.0, 4.0).unwrap();
        assert!(rel(v, 12.441_342_951_089_92) < 1e-12);
        let base = c9(1.0, 1.0, 1.0, 4.0);
        let doubled = c9(1.0, 2.0, 1.0, 4.0);
        assert!(rel(doubled, base + 3.0 * 3f64.sqrt() / 8.0 * 9.0) < 1e-14);
        let mut prev = 0.0;
        for s in [0.0, 1e-3, 1e-2, 0.1, 0.3] {
            let v = eps_pred_multiplicative(s, 8, 1.0, 1.0, 1.0, 4.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn relative_allowance_flags_infeasibility() {
        let c = c9(1.0, 0.5, 7.9, 4.0);
        assert!(!relative_noise_allowance(0.1, 8, c).feasible);
        assert!(relative_noise_allowance(1e3, 8, c).feasible);
    }

    #[test]
    fn additive_constants() {
        let k = constants_additive(1e-3, 4.0, 8).unwrap();
        assert_eq!(k.c2, 2.0 * k.c1);
        assert!(rel(k.c1, 0.838_131_254_637_362_9) < 1e-12);
        assert!(rel(k.c3_bound, 5.303_300_858_899_106e-5) < 1e-12);
        for n in 1..=200 {
            assert!(c3_exact(1e-3, 4.0, n).unwrap() <= k.c3_bound);
        }
    }

    #[test]
    fn multiplicative_constants() {
        let b = snr_bound_uniform(1e-3).unwrap();
        let k = constants_multiplicative(1e-3, b, 5.0, 4.0, 8).unwrap();
        assert!(rel(k.c6, 0.0108) < 1e-12);
        assert!(rel(k.c8, k.c8_simplified) < 1e-12);
        for s in [1e-5, 1e-3, 0.1, 0.5] {
            let b = snr_bound_uniform(s).unwrap();
            // n / (n+6)^3 peaks at n = 3
        for n in 3..=64 {
                let k = constants_multiplicative(s, b, 7.9, 4.0, n).unwrap();
                assert!(k.c7 <= k.c7_bound, "n={n} s={s}");
                assert!(rel(k.c8, k.c8_simplified) < 1e-12);
            }
        }
    }

    #[test]
    fn baseline_stepsizes() {
        assert!(rel(rg_mu(2f64.powi(-16), 4.0, 8).unwrap(), 1.918_149_905_562_466e-4) < 1e-12);
        assert!(rel(rg_mu(0.1, 4.0, 8).unwrap(), 1.552_824_984_374_854e-2) < 1e-12);
        assert!(rel(rg_mu(0.4, 4.0, 8).unwrap(), 2.0 * rg_mu(0.1, 4.0, 8).unwrap()) < 1e-14);
        assert!(rel(ss_step_length(3f64.sqrt(), 8, 9_999, 5.0).unwrap(), 2.886_751_345_948_129e-4) < 1e-12);
        assert!(rel(ss_mu(0.1, 5.0, 8).unwrap(), 3.535_533_905_932_738e-3) < 1e-12);
        let h1 = ss_step_length(1.0, 8, 99, 5.0).unwrap();
        let h4 = ss_step_length(1.0, 8, 399, 5.0).unwrap();
        assert!(rel(h1, 2.0 * h4) < 1e-14);
    }

    #[test]
    fn rsgf_gamma_values() {
        let g = rsgf_gamma(4.0, 1e-3, 1.0, 8, 10_000, None).unwrap();
        assert!(rel(g, 1.0 / 192.0) < 1e-12);
        assert!(rel(rsgf_diameter(4.0, 1.0, None), 0.5f64.sqrt()) < 1e-15);
        assert!(rel(rsgf_diameter(4.0, 0.0, Some(3.0)), 3f64.sqrt()) < 1e-15);
        assert_eq!(rsgf_diameter(4.0, -1.0, None), 1.0);
        for sigma in [1e-6, 1e-3, 1.0, 100.0] {
            for n in [2, 8, 32] {
                let g = rsgf_gamma(4.0, sigma, 0.0, n, 5000, Some(3.0)).unwrap();
                assert!(g <= step_length(4.0, n) * (1.0 + 1e-12));
            }
        }
    }
}
