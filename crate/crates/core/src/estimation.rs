//! Estimators for the constants a solver needs when the problem does not
//! supply them: the noise level, the gradient Lipschitz constant and the
//! variance of the zero-order gradient estimate.

use crate::error::{invalid, Error, Result};
use crate::noise::NoisyOracle;
use crate::rng::{gaussian_vector, RngStream};
use crate::vector::Vector;

/// Default finite-difference step for [`estimate_l1_saa`].
pub const DEFAULT_FD_STEP: f64 = 1e-2;
/// Default number of replicated evaluations per Hessian probe point.
pub const DEFAULT_SAA_SAMPLES: usize = 200;

const POWER_ITERATIONS: usize = 50;
const POWER_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateReport {
    pub value: f64,
    /// Noisy evaluations behind the estimate.
    pub sample_count: u64,
    /// Standard error of `value`, or the spread across probe points for
    /// [`estimate_grad_var`].
    pub dispersion: f64,
}

/// Sample mean and unbiased variance (Welford, so identical inputs give a
/// variance of exactly 0).
fn mean_var(xs: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    (mean, m2 / (xs.len() as f64 - 1.0))
}

fn replicate(oracle: &mut NoisyOracle, x: &[f64], m: usize) -> Result<Vec<f64>> {
    (0..m).map(|_| oracle.eval(x)).collect()
}

/// Sample standard deviation of `m` replicated evaluations at `x`.
pub fn estimate_sigma_additive(oracle: &mut NoisyOracle, x: &Vector, m: usize) -> Result<EstimateReport> {
    if m < 2 {
        return Err(invalid(format!("need at least 2 replicates, got {m}")));
    }
    let (_, var) = mean_var(&replicate(oracle, x, m)?);
    let sd = var.sqrt();
    Ok(EstimateReport {
        value: sd,
        sample_count: m as u64,
        dispersion: sd / (2.0 * (m as f64 - 1.0)).sqrt(),
    })
}

/// Replicate standard deviation divided by the replicate mean's magnitude.
///
/// Fails with [`Error::SignalDominated`] when `|mean|` is within ten standard
/// errors of zero, where the ratio is meaningless.
pub fn estimate_sigma_relative(oracle: &mut NoisyOracle, x: &Vector, m: usize) -> Result<EstimateReport> {
    if m < 2 {
        return Err(invalid(format!("need at least 2 replicates, got {m}")));
    }
    let (mean, var) = mean_var(&replicate(oracle, x, m)?);
    let sd = var.sqrt();
    let std_err = sd / (m as f64).sqrt();
    if !(mean.abs() > 10.0 * std_err) || mean == 0.0 {
        return Err(Error::SignalDominated { mean, std_err });
    }
    let value = sd / mean.abs();
    Ok(EstimateReport {
        value,
        sample_count: m as u64,
        dispersion: value / (2.0 * (m as f64 - 1.0)).sqrt(),
    })
}

/// Probe points in the central-difference Hessian stencil: the center, two
/// per axis and four per unordered pair of axes.
pub fn hessian_probe_points(n: usize) -> u64 {
    2 * (n as u64) * (n as u64) + 1
}

/// Noisy evaluations spent by [`estimate_l1_saa`].
pub fn saa_eval_cost(n: usize, samples: usize) -> u64 {
    hessian_probe_points(n) * samples as u64
}

/// Spectral norm of the central-difference Hessian of the sample-average
/// function `f̄(x) = mean of samples noisy evaluations` at `x0`.
///
/// The dispersion is the pooled standard error of the averaged probe values
/// propagated through the stencil (`4 n se / fd_step²`), a rough scale for
/// the noise left in the norm. It is 0 when `samples == 1`.
pub fn estimate_l1_saa(oracle: &mut NoisyOracle, x0: &Vector, samples: usize, fd_step: f64) -> Result<EstimateReport> {
    if samples < 1 {
        return Err(invalid("need at least 1 sample per probe point"));
    }
    if !(fd_step > 0.0) || !fd_step.is_finite() {
        return Err(invalid(format!("fd_step must be positive, got {fd_step}")));
    }
    let n = x0.dim();
    let h = fd_step;
    let mut pooled_var = 0.0;
    let mut probes = 0usize;
    let mut fbar = |offsets: &[(usize, f64)]| -> Result<f64> {
        let mut x = x0.clone();
        for &(i, d) in offsets {
            *x.component_mut(i) += d;
        }
        let vals = replicate(oracle, &x, samples)?;
        probes += 1;
        if samples >= 2 {
            let (mean, var) = mean_var(&vals);
            pooled_var += var;
            Ok(mean)
        } else {
            Ok(vals[0])
        }
    };

    let f0 = fbar(&[])?;
    let mut hess = vec![0.0; n * n];
    for i in 0..n {
        let fp = fbar(&[(i, h)])?;
        let fm = fbar(&[(i, -h)])?;
        hess[i * n + i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let fpp = fbar(&[(i, h), (j, h)])?;
            let fpm = fbar(&[(i, h), (j, -h)])?;
            let fmp = fbar(&[(i, -h), (j, h)])?;
            let fmm = fbar(&[(i, -h), (j, -h)])?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess[i * n + j] = v;
            hess[j * n + i] = v;
        }
    }
    if hess.iter().any(|v| !v.is_finite()) {
        return Err(Error::EstimationFailed("non-finite Hessian entry".into()));
    }
    let value = spectral_norm(&hess, n);
    if !value.is_finite() {
        return Err(Error::EstimationFailed("power iteration diverged".into()));
    }
    let se = if samples >= 2 {
        (pooled_var / probes as f64 / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok(EstimateReport {
        value,
        sample_count: saa_eval_cost(n, samples),
        dispersion: 4.0 * n as f64 * se / (h * h),
    })
}

/// Largest absolute eigenvalue of a symmetric row-major `n x n` matrix by
/// power iteration.
pub fn spectral_norm(matrix: &[f64], n: usize) -> f64 {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    if n == 0 {
        return 0.0;
    }
    // A fixed irregular start avoids being orthogonal to structured
    // eigenvectors (all-ones is orthogonal to half of a tridiagonal's).
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i as f64 + 1.0) * 0.754_877_666).fract()).collect();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let s = norm(&v);
    v.iter_mut().for_each(|a| *a /= s);
    let mut est = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| matrix[i * n + j] * v[j]).sum())
            .collect();
        let next = norm(&w);
        if next == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|a| a / next).collect();
        let done = (next - est).abs() <= POWER_TOL * next;
        est = next;
        if done {
            break;
        }
    }
    est
}

/// Largest total variance (trace of the componentwise variance) of the
/// zero-order gradient estimate `(f~(x + mu u) - f~(x)) / mu * u` over
/// `points`, from `m` draws per point with fresh evaluations for both terms.
///
/// `dispersion` is the range of the per-point variances.
pub fn estimate_grad_var(
    oracle: &mut NoisyOracle,
    points: &[Vector],
    mu: f64,
    m: usize,
    directions: &mut RngStream,
) -> Result<EstimateReport> {
    if points.is_empty() {
        return Err(invalid("need at least one probe point"));
    }
    if m < 2 {
        return Err(invalid(format!("need at least 2 draws per point, got {m}")));
    }
    if !(mu > 0.0) {
        return Err(invalid(format!("mu must be positive, got {mu}")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in points {
        let n = x.dim();
        let mut sum = vec![0.0; n];
        let mut sum_sq = vec![0.0; n];
        for _ in 0..m {
            let u = gaussian_vector(directions, n)?;
            let f_base = oracle.eval(x)?;
            let f_plus = oracle.eval(&x.add_scaled(mu, &u))?;
            let c = (f_plus - f_base) / mu;
            for i in 0..n {
                let g = c * u[i];
                sum[i] += g;
                sum_sq[i] += g * g;
            }
        }
        let mf = m as f64;
        let trace: f64 = (0..n)
            .map(|i| ((sum_sq[i] - sum[i] * sum[i] / mf) / (mf - 1.0)).max(0.0))
            .sum();
        lo = lo.min(trace);
        hi = hi.max(trace);
    }
    if !hi.is_finite() {
        return Err(Error::EstimationFailed("non-finite gradient variance".into()));
    }
    Ok(EstimateReport {
        value: hi,
        sample_count: (2 * m * points.len()) as u64,
        dispersion: hi - lo,
    })
}

/// `count` points drawn uniformly from the box of half-width `half_width`
/// around `center`.
pub fn box_points(rng: &mut RngStream, center: &Vector, half_width: f64, count: usize) -> Vec<Vector> {
    (0..count)
        .map(|_| {
            let mut x = center.clone();
            for i in 0..x.dim() {
                *x.component_mut(i) += half_width * (2.0 * rng.uniform() - 1.0);
            }
            x
        })
        .collect()
}
