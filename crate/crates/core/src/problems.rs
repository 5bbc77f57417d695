//! Deterministic test objectives with analytic gradients and the constants
//! the solvers and bound calculators need.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::vector::Vector;

/// A smooth deterministic objective.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
}

/// An objective together with its optimum and analytic constants.
///
/// `l0` bounds `||grad f||` over the ball of radius `sqrt(r2)` around
/// `x_star`; `l1` is the Lipschitz constant of the gradient and `r2` bounds
/// `||x0 - x_star||^2`.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub n: usize,
    objective: Arc<dyn Objective>,
    pub x_star: Vector,
    pub f_star: f64,
    pub l0: f64,
    pub l1: f64,
    pub r2: f64,
    pub x0: Vector,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("f_star", &self.f_star)
            .field("l0", &self.l0)
            .field("l1", &self.l1)
            .field("r2", &self.r2)
            .finish()
    }
}

impl ProblemSpec {
    /// Assemble a problem from an arbitrary objective. `l0` is derived as
    /// `l1 * sqrt(r2) + 1`.
    pub fn custom(
        name: impl Into<String>,
        objective: Arc<dyn Objective>,
        x_star: Vector,
        x0: Vector,
        l1: f64,
        r2: f64,
    ) -> Result<Self> {
        if x_star.dim() != x0.dim() {
            return Err(invalid("x_star and x0 dimensions differ"));
        }
        let f_star = objective.value(&x_star);
        Ok(Self {
            name: name.into(),
            n: x0.dim(),
            objective,
            x_star,
            f_star,
            l0: l0_from_ball(l1, r2),
            l1,
            r2,
            x0,
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.objective.value(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vector {
        Vector::from_raw(self.objective.gradient(x))
    }

    /// True accuracy `f(x) - f*`.
    pub fn accuracy(&self, x: &[f64]) -> f64 {
        self.eval(x) - self.f_star
    }

    /// Look up a built-in problem by name (`f1` or `sphere`).
    pub fn by_name(name: &str, n: usize) -> Result<Self> {
        match name {
            "f1" => f1_make(n),
            "sphere" => sphere_make(n),
            other => Err(invalid(format!("unknown problem `{other}` (expected f1 or sphere)"))),
        }
    }
}

fn l0_from_ball(l1: f64, r2: f64) -> f64 {
    l1 * r2.sqrt() + 1.0
}

/// Nesterov's tridiagonal quadratic
/// `f1(x) = x1^2/2 + sum (x_{i+1} - x_i)^2 / 2 + xn^2/2 - x1`.
#[derive(Clone, Copy, Debug)]
pub struct NesterovQuadratic;

impl Objective for NesterovQuadratic {
    fn value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let mut sum = 0.5 * x[0] * x[0] + 0.5 * x[n - 1] * x[n - 1] - x[0];
        for w in x.windows(2) {
            let d = w[1] - w[0];
            sum += 0.5 * d * d;
        }
        sum
    }

    /// `A x - e1` with `A = tridiag(-1, 2, -1)`.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                let g = 2.0 * x[i] - left - right;
                if i == 0 {
                    g - 1.0
                } else {
                    g
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Sphere;

impl Objective for Sphere {
    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| 2.0 * v).collect()
    }
}

pub fn f1_make(n: usize) -> Result<ProblemSpec> {
    if n < 2 {
        return Err(invalid(format!("f1 requires n >= 2, got {n}")));
    }
    let np1 = (n + 1) as f64;
    let x_star = Vector::from_raw((1..=n).map(|i| 1.0 - i as f64 / np1).collect());
    let l1 = 4.0;
    let r2 = np1 / 3.0;
    Ok(ProblemSpec {
        name: "f1".into(),
        n,
        objective: Arc::new(NesterovQuadratic),
        x_star,
        f_star: -(n as f64) / (2.0 * np1),
        l0: l0_from_ball(l1, r2),
        l1,
        r2,
        x0: Vector::zeros(n),
    })
}

pub fn sphere_make(n: usize) -> Result<ProblemSpec> {
    if n == 0 {
        return Err(invalid("sphere requires n >= 1"));
    }
    let l1 = 2.0;
    let r2 = n as f64;
    Ok(ProblemSpec {
        name: "sphere".into(),
        n,
        objective: Arc::new(Sphere),
        x_star: Vector::zeros(n),
        f_star: 0.0,
        l0: l0_from_ball(l1, r2),
        l1,
        r2,
        x0: Vector::filled(n, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn random_point(rng: &mut RngStream, n: usize, half_width: f64) -> Vec<f64> {
        (0..n).map(|_| half_width * (2.0 * rng.uniform() - 1.0)).collect()
    }

    #[test]
    fn f1_reference_values() {
        let p = f1_make(8).unwrap();
        assert!((p.f_star + 4.0 / 9.0).abs() < 1e-15);
        assert!((p.x_star[0] - 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(p.l1, 4.0);
        assert!((p.r2 - 3.0).abs() < 1e-15);

        let p2 = f1_make(2).unwrap();
        assert_eq!(p2.eval(&[1.0, 0.0]), 0.0);

        for n in [2, 5, 16] {
            let p = f1_make(n).unwrap();
            let zero = vec![0.0; n];
            assert_eq!(p.eval(&zero), 0.0);
            let g = p.grad(&zero);
            assert_eq!(g[0], -1.0);
            assert!(g.as_slice()[1..].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn f1_rejects_small_n() {
        assert!(f1_make(1).is_err());
        assert!(f1_make(0).is_err());
        assert!(sphere_make(0).is_err());
    }

    #[test]
    fn optimum_and_start_metadata() {
        for p in [f1_make(8).unwrap(), f1_make(33).unwrap(), sphere_make(5).unwrap()] {
            let fx = p.eval(&p.x_star);
            assert!((fx - p.f_star).abs() <= 1e-12 * p.f_star.abs().max(1.0));
            assert!(p.grad(&p.x_star).norm() <= 1e-10);
            assert!(p.x0.distance_sq(&p.x_star) <= p.r2 + 1e-12);
        }
    }

    #[test]
    fn f1_optimum_solves_tridiagonal_system() {
        let p = f1_make(12).unwrap();
        // A x* = e1  <=>  grad(x*) = 0
        for g in p.grad(&p.x_star).iter() {
            assert!(g.abs() <= 1e-12);
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = RngStream::new(19, 0);
        for p in [f1_make(8).unwrap(), sphere_make(6).unwrap()] {
            for _ in 0..10 {
                let x = random_point(&mut rng, p.n, 2.0);
                let g = p.grad(&x);
                let h = 1e-5;
                let fd: Vec<f64> = (0..p.n)
                    .map(|i| {
                        let mut xp = x.clone();
                        let mut xm = x.clone();
                        xp[i] += h;
                        xm[i] -= h;
                        (p.eval(&xp) - p.eval(&xm)) / (2.0 * h)
                    })
                    .collect();
                let err = g.sub(&Vector::from_raw(fd)).norm();
                assert!(err / g.norm().max(1.0) <= 1e-6, "{err}");
            }
        }
    }

    #[test]
    fn f1_is_convex_on_random_segments() {
        let p = f1_make(8).unwrap();
        let mut rng = RngStream::new(23, 0);
        for _ in 0..100 {
            let x = random_point(&mut rng, 8, 3.0);
            let y = random_point(&mut rng, 8, 3.0);
            for t in [0.25, 0.5, 0.75] {
                let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
                assert!(p.eval(&z) <= t * p.eval(&x) + (1.0 - t) * p.eval(&y) + 1e-12);
            }
        }
    }

    #[test]
    fn f1_gradient_is_four_lipschitz() {
        let p = f1_make(8).unwrap();
        let mut rng = RngStream::new(29, 0);
        for _ in 0..1000 {
            let x = random_point(&mut rng, 8, 5.0);
            let y = random_point(&mut rng, 8, 5.0);
            let dg = p.grad(&x).sub(&p.grad(&y)).norm();
            let dx = Vector::from_raw(x).sub(&Vector::from_raw(y)).norm();
            assert!(dg <= 4.0 * dx + 1e-12);
        }
    }

    #[test]
    fn sphere_values() {
        let p = sphere_make(3).unwrap();
        assert_eq!(p.eval(&[1.0, 1.0, 1.0]), 3.0);
        assert_eq!(p.grad(&[1.0, 0.0, 0.0]).as_slice(), &[2.0, 0.0, 0.0]);
        assert_eq!(p.eval(&p.x_star), 0.0);
        assert_eq!(p.r2, 3.0);
    }
}
