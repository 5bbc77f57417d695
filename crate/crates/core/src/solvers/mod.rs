//! Zero-order solvers behind one step-driven interface, and the driver that
//! runs any of them to an iteration limit or evaluation budget.

mod es;
mod line_search;
mod pursuit;
mod smoothing;
mod stars;
mod trajectory;

use std::fmt;
use std::str::FromStr;

pub use es::{OnePlusOneEs, ES_FAILURE_FACTOR, ES_SUCCESS_FACTOR, ES_SUCCESS_PROBABILITY};
pub use line_search::{golden_section, LineSearchOutcome, INV_GOLDEN_RATIO};
pub use pursuit::RandomPursuit;
pub use smoothing::FixedSmoothing;
pub use stars::Stars;
pub use trajectory::{Record, Trajectory};

use crate::error::{invalid, Error, Result};
use crate::noise::{NoiseKind, NoiseModel, NoisyOracle};
use crate::problems::ProblemSpec;
use crate::rng::{Lane, RngStream};
use crate::theory::DEFAULT_MU_MIN;
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Stars,
    Rg,
    Ss,
    Rsgf,
    Rp,
    Es,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Stars,
        SolverKind::Rg,
        SolverKind::Ss,
        SolverKind::Rsgf,
        SolverKind::Rp,
        SolverKind::Es,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Stars => "stars",
            SolverKind::Rg => "rg",
            SolverKind::Ss => "ss",
            SolverKind::Rsgf => "rsgf",
            SolverKind::Rp => "rp",
            SolverKind::Es => "es",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown solver `{s}` (expected stars, rg, ss, rsgf, rp or es)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarsParams {
    pub l1: f64,
    /// `sigma_a` or `sigma_r`, depending on `noise_kind`.
    pub sigma: f64,
    pub noise_kind: NoiseKind,
    pub mu_min: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RgParams {
    pub l1: f64,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsParams {
    pub l0: f64,
    pub r2: f64,
    pub epsilon: f64,
    /// Planned iteration count `N`. Derived from the run limits when unset.
    pub iterations: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RsgfParams {
    pub l1_est: f64,
    pub sigma_est: f64,
    /// `f(x0)` for the diameter proxy. Measured with one noisy evaluation at
    /// initialization when unset.
    pub f0: Option<f64>,
    pub mu: f64,
    pub r2: Option<f64>,
    pub iterations: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RpParams {
    /// Bracket width at which the line search stops.
    pub line_search_accuracy: f64,
    /// The line search covers `t` in `[-span, span]`.
    pub line_search_span: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EsParams {
    pub sigma0: f64,
    pub p: f64,
    pub c_s: f64,
    pub c_f: f64,
}

pub const DEFAULT_RG_EPSILON: f64 = 1.0 / 65536.0;
pub const DEFAULT_SS_EPSILON: f64 = 0.1;
pub const DEFAULT_RSGF_MU: f64 = 0.0025;
pub const DEFAULT_RP_ACCURACY: f64 = 0.0025;
pub const DEFAULT_RP_SPAN: f64 = 10.0;
pub const DEFAULT_ES_SIGMA0: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SolverParams {
    Stars(StarsParams),
    Rg(RgParams),
    Ss(SsParams),
    Rsgf(RsgfParams),
    Rp(RpParams),
    Es(EsParams),
}

impl SolverParams {
    pub fn kind(&self) -> SolverKind {
        match self {
            SolverParams::Stars(_) => SolverKind::Stars,
            SolverParams::Rg(_) => SolverKind::Rg,
            SolverParams::Ss(_) => SolverKind::Ss,
            SolverParams::Rsgf(_) => SolverKind::Rsgf,
            SolverParams::Rp(_) => SolverKind::Rp,
            SolverParams::Es(_) => SolverKind::Es,
        }
    }

    /// STARS tuned with the problem's `L1` and the true noise level.
    pub fn stars(problem: &ProblemSpec, noise: NoiseModel) -> Self {
        SolverParams::Stars(StarsParams {
            l1: problem.l1,
            sigma: noise.sigma,
            noise_kind: noise.kind,
            mu_min: DEFAULT_MU_MIN,
        })
    }

    pub fn rg(problem: &ProblemSpec) -> Self {
        SolverParams::Rg(RgParams {
            l1: problem.l1,
            epsilon: DEFAULT_RG_EPSILON,
        })
    }

    pub fn ss(problem: &ProblemSpec) -> Self {
        SolverParams::Ss(SsParams {
            l0: problem.l0,
            r2: problem.r2,
            epsilon: DEFAULT_SS_EPSILON,
            iterations: None,
        })
    }

    pub fn rsgf(l1_est: f64, sigma_est: f64, r2: Option<f64>) -> Self {
        SolverParams::Rsgf(RsgfParams {
            l1_est,
            sigma_est,
            f0: None,
            mu: DEFAULT_RSGF_MU,
            r2,
            iterations: None,
        })
    }

    pub fn rp() -> Self {
        SolverParams::Rp(RpParams {
            line_search_accuracy: DEFAULT_RP_ACCURACY,
            line_search_span: DEFAULT_RP_SPAN,
        })
    }

    pub fn es() -> Self {
        SolverParams::Es(EsParams {
            sigma0: DEFAULT_ES_SIGMA0,
            p: ES_SUCCESS_PROBABILITY,
            c_s: ES_SUCCESS_FACTOR,
            c_f: ES_FAILURE_FACTOR,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub params: SolverParams,
    pub iteration_limit: Option<u64>,
    pub eval_budget: Option<u64>,
    /// Log every `record_stride`-th iteration (the final iterate is always
    /// logged). 1 logs every iteration.
    pub record_stride: u64,
}

impl SolverConfig {
    pub fn with_budget(params: SolverParams, eval_budget: u64) -> Self {
        Self {
            params,
            iteration_limit: None,
            eval_budget: Some(eval_budget),
            record_stride: 1,
        }
    }

    pub fn with_iterations(params: SolverParams, iterations: u64) -> Self {
        Self {
            params,
            iteration_limit: Some(iterations),
            eval_budget: None,
            record_stride: 1,
        }
    }

    pub fn kind(&self) -> SolverKind {
        self.params.kind()
    }

    pub fn validate(&self) -> Result<()> {
        if self.iteration_limit.is_none() && self.eval_budget.is_none() {
            return Err(invalid("solver config needs an iteration limit or an evaluation budget"));
        }
        if self.record_stride == 0 {
            return Err(invalid("record stride must be >= 1"));
        }
        Ok(())
    }

    /// The iteration count `N` a fixed-cost solver plans for, given its
    /// initialization and per-step evaluation costs.
    fn planned_iterations(&self, init_cost: u64, step_cost: u64) -> u64 {
        let from_budget = self
            .eval_budget
            .map(|b| b.saturating_sub(init_cost) / step_cost.max(1));
        match (self.iteration_limit, from_budget) {
            (Some(i), Some(b)) => i.min(b),
            (Some(i), None) => i,
            (None, Some(b)) => b,
            (None, None) => 0,
        }
        .max(1)
    }
}

/// Iterate state shared by all solvers.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub x: Vector,
    /// The reusable noisy value at `x` (STARS only).
    pub cached_f_noisy: Option<f64>,
    pub k: u64,
    /// Current mutation strength (ES only).
    pub es_sigma: Option<f64>,
    /// Smoothing stepsize used in the most recent step.
    pub last_mu: Option<f64>,
    /// Noisy evaluations spent by the most recent step.
    pub last_step_evals: u64,
    pub rng: RngStream,
}

impl SolverState {
    fn new(x0: Vector, rng: RngStream) -> Self {
        Self {
            x: x0,
            cached_f_noisy: None,
            k: 0,
            es_sigma: None,
            last_mu: None,
            last_step_evals: 0,
            rng,
        }
    }
}

/// A zero-order solver driven one iteration at a time.
pub trait Solver {
    fn kind(&self) -> SolverKind;

    /// Evaluations spent by [`Solver::init`].
    fn init_cost(&self) -> u64;

    /// Fewest evaluations a step needs. Fixed-cost solvers always spend
    /// exactly this many.
    fn min_step_cost(&self) -> u64;

    fn init(&mut self, oracle: &mut NoisyOracle) -> Result<()>;

    /// One iteration spending at most `allowance` evaluations
    /// (`allowance >= min_step_cost()`).
    fn step(&mut self, oracle: &mut NoisyOracle, allowance: u64) -> Result<()>;

    fn state(&self) -> &SolverState;
}

/// Instantiate the solver described by `config` for `problem`, with search
/// directions drawn from `rng`.
pub fn build_solver(config: &SolverConfig, problem: &ProblemSpec, rng: RngStream) -> Result<Box<dyn Solver>> {
    config.validate()?;
    let state = SolverState::new(problem.x0.clone(), rng);
    Ok(match config.params {
        SolverParams::Stars(p) => Box::new(Stars::new(p, problem.n, state)?),
        SolverParams::Rg(p) => Box::new(FixedSmoothing::rg(p, problem.n, state)?),
        SolverParams::Ss(p) => {
            let iterations = p.iterations.unwrap_or_else(|| config.planned_iterations(0, 2));
            Box::new(FixedSmoothing::ss(p, iterations, problem.n, state)?)
        }
        SolverParams::Rsgf(p) => {
            let init_cost = u64::from(p.f0.is_none());
            let iterations = p.iterations.unwrap_or_else(|| config.planned_iterations(init_cost, 2));
            Box::new(FixedSmoothing::rsgf(p, iterations, problem.n, state)?)
        }
        SolverParams::Rp(p) => Box::new(RandomPursuit::new(p, state)?),
        SolverParams::Es(p) => Box::new(OnePlusOneEs::new(p, state)?),
    })
}

/// A run that stopped early. The trajectory up to the failure is kept.
#[derive(Debug)]
pub struct RunAbort {
    pub trajectory: Trajectory,
    pub error: Error,
}

impl fmt::Display for RunAbort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run aborted after {} records: {}", self.trajectory.records.len(), self.error)
    }
}

impl std::error::Error for RunAbort {}

/// Run one trial. Noise comes from stream `(seed, trial)` on the noise lane
/// and directions from the same stream on the directions lane, so the result
/// is a pure function of `(config, problem, noise, seed, trial)`.
pub fn run(config: &SolverConfig, problem: &ProblemSpec, noise: NoiseModel, seed: u64, trial: u64) -> Result<Trajectory, RunAbort> {
    let abort = |error| RunAbort {
        trajectory: Trajectory::default(),
        error,
    };
    let mut oracle = NoisyOracle::new(problem.clone(), noise, RngStream::with_lane(seed, trial, Lane::Noise)).map_err(abort)?;
    let directions = RngStream::with_lane(seed, trial, Lane::Directions);
    run_with_oracle(config, &mut oracle, directions)
}

/// Run against a caller-owned oracle (useful for instrumented accounting).
pub fn run_with_oracle(config: &SolverConfig, oracle: &mut NoisyOracle, directions: RngStream) -> Result<Trajectory, RunAbort> {
    let problem = oracle.problem().clone();
    let mut solver = match build_solver(config, &problem, directions) {
        Ok(s) => s,
        Err(error) => {
            return Err(RunAbort {
                trajectory: Trajectory::default(),
                error,
            })
        }
    };

    let mut traj = Trajectory::default();
    let log = |traj: &mut Trajectory, solver: &dyn Solver, oracle: &NoisyOracle| {
        let st = solver.state();
        let f_true = problem.eval(&st.x);
        traj.push(Record {
            k: st.k,
            nevals: oracle.eval_count(),
            f_true,
            acc: f_true - problem.f_star,
        });
    };
    log(&mut traj, solver.as_ref(), oracle);

    let start = oracle.eval_count();
    let iter_limit = config.iteration_limit.unwrap_or(u64::MAX);
    let remaining = |oracle: &NoisyOracle| match config.eval_budget {
        Some(b) => b.saturating_sub(oracle.eval_count() - start),
        None => u64::MAX,
    };

    let can_start = iter_limit > 0 && remaining(oracle) >= solver.init_cost() + solver.min_step_cost();
    if can_start {
        if let Err(error) = solver.init(oracle) {
            traj.x_final = Some(solver.state().x.clone());
            return Err(RunAbort { trajectory: traj, error });
        }
        let mut logged_last = false;
        while solver.state().k < iter_limit && remaining(oracle) >= solver.min_step_cost() {
            if let Err(error) = solver.step(oracle, remaining(oracle)) {
                traj.x_final = Some(solver.state().x.clone());
                return Err(RunAbort { trajectory: traj, error });
            }
            logged_last = solver.state().k % config.record_stride == 0;
            if logged_last {
                log(&mut traj, solver.as_ref(), oracle);
            }
        }
        if !logged_last && solver.state().k > 0 {
            log(&mut traj, solver.as_ref(), oracle);
        }
    }
    traj.x_final = Some(solver.state().x.clone());
    Ok(traj)
}

/// `(f~(x + mu u) - f~(x)) / mu * u`, rejecting non-finite results.
pub fn forward_difference_step(x: &Vector, u: &Vector, f_plus: f64, f_base: f64, mu: f64, h: f64, k: u64) -> Result<Vector> {
    let coef = (f_plus - f_base) / mu;
    let next = x.add_scaled(-h * coef, u);
    if !coef.is_finite() || !next.is_finite() {
        return Err(Error::NonFiniteStep { iteration: k + 1 });
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{f1_make, sphere_make};

    fn f1() -> ProblemSpec {
        f1_make(8).unwrap()
    }

    fn all_params(problem: &ProblemSpec, noise: NoiseModel) -> Vec<SolverParams> {
        vec![
            SolverParams::stars(problem, noise),
            SolverParams::rg(problem),
            SolverParams::ss(problem),
            SolverParams::rsgf(problem.l1, 1e-3, Some(problem.r2)),
            SolverParams::rp(),
            SolverParams::es(),
        ]
    }

    #[test]
    fn stars_additive_spends_two_per_step_plus_one() {
        let p = f1();
        let noise = NoiseModel::additive(1e-3).unwrap();
        let cfg = SolverConfig::with_iterations(SolverParams::stars(&p, noise), 50);
        let t = run(&cfg, &p, noise, 1, 0).unwrap();
        assert_eq!(t.last().unwrap().nevals, 2 * 50 + 1);
        assert_eq!(t.records.len(), 51);
        assert_eq!(t.records[0].nevals, 0);
    }

    #[test]
    fn stars_multiplicative_spends_three_per_step_plus_one() {
        let p = f1();
        let noise = NoiseModel::multiplicative(1e-4).unwrap();
        let cfg = SolverConfig::with_iterations(SolverParams::stars(&p, noise), 40);
        let t = run(&cfg, &p, noise, 1, 0).unwrap();
        assert_eq!(t.last().unwrap().nevals, 3 * 40 + 1);
    }

    #[test]
    fn budget_caps_every_solver() {
        let p = f1();
        let noise = NoiseModel::additive(1e-3).unwrap();
        for params in all_params(&p, noise) {
            let cfg = SolverConfig::with_budget(params, 2001);
            let t = run(&cfg, &p, noise, 3, 1).unwrap();
            let last = t.last().unwrap();
            assert!(last.nevals <= 2001, "{}: {}", params.kind(), last.nevals);
            if params.kind() == SolverKind::Stars {
                assert_eq!(last.k, 1000);
                assert_eq!(last.nevals, 2001);
            }
        }
    }

    #[test]
    fn zero_budget_logs_only_the_start() {
        let p = f1();
        let noise = NoiseModel::additive(1e-3).unwrap();
        for params in all_params(&p, noise) {
            let t = run(&SolverConfig::with_budget(params, 0), &p, noise, 1, 0).unwrap();
            assert_eq!(t.records.len(), 1);
            assert_eq!(t.records[0].k, 0);
            assert_eq!(t.records[0].acc, p.accuracy(&p.x0));
        }
    }

    #[test]
    fn missing_limits_are_rejected() {
        let p = f1();
        let cfg = SolverConfig {
            params: SolverParams::rp(),
            iteration_limit: None,
            eval_budget: None,
            record_stride: 1,
        };
        assert!(run(&cfg, &p, NoiseModel::additive(0.0).unwrap(), 0, 0).is_err());
    }

    #[test]
    fn rp_probe_counts_add_up() {
        let p = f1();
        let noise = NoiseModel::additive(1e-3).unwrap();
        let mut oracle = NoisyOracle::new(p.clone(), noise, RngStream::new(5, 0)).unwrap();
        let dirs = RngStream::with_lane(5, 0, Lane::Directions);
        let mut solver = build_solver(&SolverConfig::with_iterations(SolverParams::rp(), 10), &p, dirs).unwrap();
        solver.init(&mut oracle).unwrap();
        let mut spent = 0;
        for _ in 0..10 {
            solver.step(&mut oracle, u64::MAX).unwrap();
            // span 20 shrunk to 0.0025
            assert_eq!(solver.state().last_step_evals, 20);
            spent += solver.state().last_step_evals;
        }
        assert_eq!(oracle.eval_count(), spent);
    }

    #[test]
    fn rp_stops_mid_search_on_budget() {
        let p = f1();
        let noise = NoiseModel::additive(1e-3).unwrap();
        let t = run(&SolverConfig::with_budget(SolverParams::rp(), 45), &p, noise, 2, 0).unwrap();
        assert_eq!(t.last().unwrap().nevals, 45);
        assert_eq!(t.last().unwrap().k, 3);
    }

    #[test]
    fn rp_line_minimum_is_exact_on_a_noiseless_sphere() {
        // Along a unit direction u from x, the sphere minimizer is t = -<x, u>.
        let p = sphere_make(3).unwrap();
        let noise = NoiseModel::additive(0.0).unwrap();
        let mut oracle = NoisyOracle::new(p.clone(), noise, RngStream::new(0, 0)).unwrap();
        let state = SolverState::new(Vector::new(vec![2.0, 0.0, 0.0]).unwrap(), RngStream::with_lane(9, 0, Lane::Directions));
        let mut probe_rng = state.rng.clone();
        let g = crate::rng::gaussian_vector(&mut probe_rng, 3).unwrap();
        let u = g.scaled(1.0 / g.norm());
        let mut rp = RandomPursuit::new(
            RpParams {
                line_search_accuracy: DEFAULT_RP_ACCURACY,
                line_search_span: DEFAULT_RP_SPAN,
            },
            state,
        )
        .unwrap();
        rp.step(&mut oracle, u64::MAX).unwrap();
        let x = &rp.state().x;
        let t_star = -2.0 * u[0];
        let expected = Vector::new(vec![2.0, 0.0, 0.0]).unwrap().add_scaled(t_star, &u);
        assert!(x.sub(&expected).norm() <= DEFAULT_RP_ACCURACY);
        // The new iterate is (nearly) orthogonal to the direction searched.
        assert!(x.dot(&u).abs() <= DEFAULT_RP_ACCURACY);
    }

    #[test]
    fn stars_step_matches_hand_computation() {
        let p = sphere_make(2).unwrap();
        let noise = NoiseModel::additive(0.0).unwrap();
        let mut oracle = NoisyOracle::new(p.clone(), noise, RngStream::new(0, 0)).unwrap();
        let dirs = RngStream::with_lane(4, 0, Lane::Directions);
        let mut u_rng = dirs.clone();
        let u = crate::rng::gaussian_vector(&mut u_rng, 2).unwrap();
        let params = StarsParams {
            l1: 2.0,
            sigma: 1e-6,
            noise_kind: NoiseKind::Additive,
            mu_min: DEFAULT_MU_MIN,
        };
        let mut s = Stars::new(params, 2, SolverState::new(p.x0.clone(), dirs)).unwrap();
        s.init(&mut oracle).unwrap();
        s.step(&mut oracle, u64::MAX).unwrap();
        let mu = s.mu_coefficient();
        let h = 1.0 / (4.0 * 2.0 * 6.0);
        let x0 = [1.0, 1.0];
        let f = |x: [f64; 2]| x[0] * x[0] + x[1] * x[1];
        let d = (f([x0[0] + mu * u[0], x0[1] + mu * u[1]]) - f(x0)) / mu;
        let want = [x0[0] - h * d * u[0], x0[1] - h * d * u[1]];
        let got = &s.state().x;
        assert!((got[0] - want[0]).abs() < 1e-14 && (got[1] - want[1]).abs() < 1e-14);
        assert_eq!(s.state().cached_f_noisy, Some(f(want)));
    }

    #[test]
    fn mirrored_direction_gives_mirrored_step_for_linear_objective() {
        // On a linear function the forward difference is exact, so u and -u
        // produce the same step.
        let x = Vector::new(vec![0.5, -1.0]).unwrap();
        let u = Vector::new(vec![0.3, 0.7]).unwrap();
        let neg = u.scaled(-1.0);
        let lin = |v: &Vector| 2.0 * v[0] - v[1];
        let mu = 1e-3;
        let a = forward_difference_step(&x, &u, lin(&x.add_scaled(mu, &u)), lin(&x), mu, 0.1, 0).unwrap();
        let b = forward_difference_step(&x, &neg, lin(&x.add_scaled(mu, &neg)), lin(&x), mu, 0.1, 0).unwrap();
        assert!(a.sub(&b).norm() < 1e-12);
    }

    #[test]
    fn non_finite_step_aborts_with_partial_trajectory() {
        let x = Vector::new(vec![1.0]).unwrap();
        let u = Vector::new(vec![1.0]).unwrap();
        let e = forward_difference_step(&x, &u, f64::INFINITY, 0.0, 1.0, 1.0, 6).unwrap_err();
        assert!(matches!(e, Error::NonFiniteStep { iteration: 7 }));
    }

    #[test]
    fn es_step_size_follows_success() {
        let p = sphere_make(4).unwrap();
        let noise = NoiseModel::additive(0.0).unwrap();
        let mut oracle = NoisyOracle::new(p.clone(), noise, RngStream::new(0, 0)).unwrap();
        let state = SolverState::new(p.x0.clone(), RngStream::with_lane(1, 0, Lane::Directions));
        let SolverParams::Es(ep) = SolverParams::es() else { unreachable!() };
        let mut es = OnePlusOneEs::new(ep, state).unwrap();
        for _ in 0..30 {
            let before_x = es.state().x.clone();
            let before_s = es.state().es_sigma.unwrap();
            es.step(&mut oracle, u64::MAX).unwrap();
            let after_s = es.state().es_sigma.unwrap();
            if es.state().x == before_x {
                assert!((after_s - before_s * ES_FAILURE_FACTOR).abs() <= 1e-15 * before_s);
            } else {
                assert!((after_s - before_s * ES_SUCCESS_FACTOR).abs() <= 1e-15 * after_s);
                assert!(p.eval(&es.state().x) <= p.eval(&before_x));
            }
        }
        assert!(OnePlusOneEs::accepts(1.0, 1.0));
        assert!(!OnePlusOneEs::accepts(1.0, 1.0 + 1e-16_f64.max(f64::EPSILON)));
    }

    #[test]
    fn es_is_invariant_to_monotone_transforms() {
        use std::sync::Arc;
        struct Exp(ProblemSpec);
        impl crate::problems::Objective for Exp {
            fn value(&self, x: &[f64]) -> f64 {
                self.0.eval(x).exp()
            }
            fn gradient(&self, x: &[f64]) -> Vec<f64> {
                let e = self.value(x);
                self.0.grad(x).as_slice().iter().map(|g| g * e).collect()
            }
        }
        let base = f1_make(4).unwrap();
        let warped = ProblemSpec::custom("exp-f1", Arc::new(Exp(base.clone())), base.x_star.clone(), base.x0.clone(), base.l1, base.r2).unwrap();
        let noise = NoiseModel::additive(0.0).unwrap();
        let cfg = SolverConfig::with_iterations(SolverParams::es(), 200);
        let a = run(&cfg, &base, noise, 7, 0).unwrap();
        let b = run(&cfg, &warped, noise, 7, 0).unwrap();
        assert_eq!(a.x_final, b.x_final);
    }

    #[test]
    fn noiseless_es_accuracy_never_increases() {
        let p = f1();
        let noise = NoiseModel::additive(0.0).unwrap();
        let t = run(&SolverConfig::with_iterations(SolverParams::es(), 500), &p, noise, 11, 0).unwrap();
        for w in t.records.windows(2) {
            assert!(w[1].acc <= w[0].acc);
        }
    }

    #[test]
    fn every_solver_solves_a_noiseless_sphere() {
        let p = sphere_make(8).unwrap();
        let noise = NoiseModel::additive(0.0).unwrap();
        let params = [
            SolverParams::Stars(StarsParams {
                l1: p.l1,
                sigma: 1e-12,
                noise_kind: NoiseKind::Additive,
                mu_min: DEFAULT_MU_MIN,
            }),
            SolverParams::rg(&p),
            SolverParams::ss(&p),
            SolverParams::rsgf(p.l1, 1e-3, Some(p.r2)),
            SolverParams::rp(),
            SolverParams::es(),
        ];
        for params in params {
            let t = run(&SolverConfig::with_budget(params, 100_000), &p, noise, 1, 0).unwrap();
            let acc = t.final_accuracy().unwrap();
            assert!(acc <= 1e-3, "{} reached {acc}", params.kind());
        }
    }

    #[test]
    fn stars_descends_on_average() {
        let p = f1();
        let noise = NoiseModel::additive(1e-4).unwrap();
        let cfg = SolverConfig::with_budget(SolverParams::stars(&p, noise), 2001);
        let start = p.accuracy(&p.x0);
        let mut sum = 0.0;
        for trial in 0..20 {
            sum += run(&cfg, &p, noise, 42, trial).unwrap().final_accuracy().unwrap();
        }
        assert!(sum / 20.0 < 0.5 * start);
    }

    #[test]
    fn runs_are_deterministic_and_trials_differ() {
        let p = f1();
        let noise = NoiseModel::multiplicative(1e-3).unwrap();
        let cfg = SolverConfig::with_iterations(SolverParams::stars(&p, noise), 100);
        let a = run(&cfg, &p, noise, 9, 0).unwrap();
        let b = run(&cfg, &p, noise, 9, 0).unwrap();
        let c = run(&cfg, &p, noise, 9, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.x_final, c.x_final);
    }

    #[test]
    fn record_stride_keeps_the_last_iterate() {
        let p = f1();
        let noise = NoiseModel::additive(1e-3).unwrap();
        let mut cfg = SolverConfig::with_iterations(SolverParams::stars(&p, noise), 25);
        cfg.record_stride = 10;
        let t = run(&cfg, &p, noise, 1, 0).unwrap();
        let ks: Vec<u64> = t.records.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![0, 10, 20, 25]);
        cfg.record_stride = 1;
        let full = run(&cfg, &p, noise, 1, 0).unwrap();
        assert_eq!(full.last(), t.last());
    }

    #[test]
    fn rejected_configs_surface_as_config_errors() {
        let p = f1();
        let params = SolverParams::Stars(StarsParams {
            l1: p.l1,
            sigma: 0.7,
            noise_kind: NoiseKind::Multiplicative,
            mu_min: DEFAULT_MU_MIN,
        });
        let e = build_solver(&SolverConfig::with_iterations(params, 1), &p, RngStream::new(0, 0)).err().unwrap();
        assert!(matches!(e, Error::ConfigRejected(_)));
    }
}
