//! Seeded multi-trial experiments: running solver grids, aggregating
//! trajectories, and writing CSVs and plot scripts.

mod csv;
mod plot;
mod protocols;

use std::path::{Path, PathBuf};

pub use csv::{read_aggregate_csv, read_trial_csv, write_aggregate_csv, write_trial_csv, AGGREGATE_HEADER, TRIAL_HEADER};
pub use plot::{emit_plot_script, PlotCell, PlotMode};
pub use protocols::{fig1, fig2, fig2_additive, fig2_multiplicative, fig3, Fig2Row, FigureOptions, FigureReport, FIG1_BUDGET, FIG1_SIGMAS, FIG2_DIMS, FIG2_PAIRS, FIG3_BUDGET, FIG3_SIGMAS};

use crate::error::{invalid, Result};
use crate::estimation::{box_points, estimate_grad_var, estimate_l1_saa, DEFAULT_FD_STEP, DEFAULT_SAA_SAMPLES};
use crate::noise::{NoiseKind, NoiseModel, NoisyOracle};
use crate::problems::ProblemSpec;
use crate::rng::{Lane, RngStream};
use crate::solvers::{self, SolverConfig, SolverKind, SolverParams, Trajectory, DEFAULT_RSGF_MU, DEFAULT_SS_EPSILON};

/// Points and draws per point for the RSGF gradient-variance estimate.
pub const RSGF_VAR_POINTS: usize = 10;
pub const RSGF_VAR_DRAWS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunLimit {
    Evals(u64),
    Iterations(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: String,
    pub n: usize,
    pub noise_kind: NoiseKind,
    pub sigmas: Vec<f64>,
    pub solvers: Vec<SolverKind>,
    pub seeds: u64,
    pub seed0: u64,
    pub limit: RunLimit,
    pub record_stride: u64,
    pub ss_epsilon: f64,
    /// Worker threads for trials; `None` uses all cores.
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(problem: &str, n: usize, noise_kind: NoiseKind, sigmas: Vec<f64>, solvers: Vec<SolverKind>, limit: RunLimit) -> Self {
        Self {
            problem: problem.to_owned(),
            n,
            noise_kind,
            sigmas,
            solvers,
            seeds: 1,
            seed0: 0,
            limit,
            record_stride: 1,
            ss_epsilon: DEFAULT_SS_EPSILON,
            workers: None,
            output_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(invalid("need at least one seed"));
        }
        if self.sigmas.is_empty() || self.solvers.is_empty() {
            return Err(invalid("need at least one sigma and one solver"));
        }
        if self.record_stride == 0 {
            return Err(invalid("record stride must be >= 1"));
        }
        for &s in &self.sigmas {
            NoiseModel::new(self.noise_kind, s)?;
        }
        ProblemSpec::by_name(&self.problem, self.n)?;
        Ok(())
    }
}

/// One (noise level, solver) cell of an experiment.
#[derive(Clone, Debug)]
pub struct CellResult {
    pub noise: NoiseModel,
    pub solver: SolverKind,
    pub params: SolverParams,
    /// Completed trials, indexed by trial number.
    pub trajectories: Vec<(u64, Trajectory)>,
    /// Aborted trials with the error message.
    pub failures: Vec<(u64, String)>,
    /// `None` when every trial aborted.
    pub aggregate: Option<AggregateSeries>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub problem: ProblemSpec,
    pub cells: Vec<CellResult>,
}

impl ExperimentResult {
    pub fn cell(&self, kind: NoiseKind, sigma: f64, solver: SolverKind) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.noise.kind == kind && c.noise.sigma == sigma && c.solver == solver)
    }

    pub fn failure_count(&self) -> usize {
        self.cells.iter().map(|c| c.failures.len()).sum()
    }
}

/// Directory name for a noise cell, e.g. `add_1e-3`.
pub fn cell_dir_name(noise: NoiseModel) -> String {
    format!("{}_{:e}", noise.kind.short_name(), noise.sigma)
}

/// RSGF parameters with `L1` and the gradient-estimate spread estimated on a
/// separate oracle. Those evaluations are not charged to any trial.
pub fn rsgf_params(problem: &ProblemSpec, noise: NoiseModel, seed: u64) -> Result<SolverParams> {
    let mut oracle = NoisyOracle::new(problem.clone(), noise, RngStream::with_lane(seed, 0, Lane::Estimation))?;
    let l1 = estimate_l1_saa(&mut oracle, &problem.x0, DEFAULT_SAA_SAMPLES, DEFAULT_FD_STEP)?.value;
    let points = box_points(&mut RngStream::with_lane(seed, 1, Lane::Estimation), &problem.x0, 1.0, RSGF_VAR_POINTS);
    let mut dirs = RngStream::with_lane(seed, 2, Lane::Estimation);
    let var = estimate_grad_var(&mut oracle, &points, DEFAULT_RSGF_MU, RSGF_VAR_DRAWS, &mut dirs)?.value;
    Ok(SolverParams::rsgf(l1, var.sqrt(), Some(problem.r2)))
}

/// Default parameters for `kind` on `problem` under `noise`.
pub fn default_params(kind: SolverKind, problem: &ProblemSpec, noise: NoiseModel, seed: u64, ss_epsilon: f64) -> Result<SolverParams> {
    Ok(match kind {
        SolverKind::Stars => SolverParams::stars(problem, noise),
        SolverKind::Rg => SolverParams::rg(problem),
        SolverKind::Ss => match SolverParams::ss(problem) {
            SolverParams::Ss(mut p) => {
                p.epsilon = ss_epsilon;
                SolverParams::Ss(p)
            }
            other => other,
        },
        SolverKind::Rsgf => rsgf_params(problem, noise, seed)?,
        SolverKind::Rp => SolverParams::rp(),
        SolverKind::Es => SolverParams::es(),
    })
}

fn solver_config(params: SolverParams, limit: RunLimit, stride: u64) -> SolverConfig {
    let mut c = match limit {
        RunLimit::Evals(b) => SolverConfig::with_budget(params, b),
        RunLimit::Iterations(i) => SolverConfig::with_iterations(params, i),
    };
    c.record_stride = stride;
    c
}

type TrialOutcome = std::result::Result<Trajectory, String>;

fn run_trials(jobs: &[(usize, u64)], cells: &[(NoiseModel, SolverConfig)], problem: &ProblemSpec, seed0: u64, workers: Option<usize>) -> Vec<TrialOutcome> {
    let one = |&(cell, trial): &(usize, u64)| -> TrialOutcome {
        let (noise, cfg) = &cells[cell];
        solvers::run(cfg, problem, *noise, seed0, trial).map_err(|e| e.to_string())
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let go = || jobs.par_iter().map(one).collect::<Vec<_>>();
        match workers.and_then(|w| rayon::ThreadPoolBuilder::new().num_threads(w).build().ok()) {
            Some(pool) => pool.install(go),
            None => go(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        jobs.iter().map(one).collect()
    }
}

/// Run every (sigma, solver) cell for `seeds` trials. Trial `i` uses stream
/// `i` under `seed0`, so results do not depend on solver order, worker count
/// or which other cells are present. With an output directory set, trial
/// and aggregate CSVs and plot scripts are written after all trials finish.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let problem = ProblemSpec::by_name(&config.problem, config.n)?;
    let mut cells = Vec::new();
    for &sigma in &config.sigmas {
        let noise = NoiseModel::new(config.noise_kind, sigma)?;
        for &kind in &config.solvers {
            let params = default_params(kind, &problem, noise, config.seed0, config.ss_epsilon)?;
            let cfg = solver_config(params, config.limit, config.record_stride);
            cfg.validate()?;
            solvers::build_solver(&cfg, &problem, RngStream::new(0, 0))?;
            cells.push((noise, cfg));
        }
    }
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..config.seeds).map(move |t| (c, t)))
        .collect();
    let mut outcomes = run_trials(&jobs, &cells, &problem, config.seed0, config.workers).into_iter();

    let mut results = Vec::with_capacity(cells.len());
    for (noise, cfg) in cells {
        let mut trajectories = Vec::new();
        let mut failures = Vec::new();
        for trial in 0..config.seeds {
            match outcomes.next().expect("one outcome per job") {
                Ok(t) => trajectories.push((trial, t)),
                Err(e) => failures.push((trial, e)),
            }
        }
        let done: Vec<Trajectory> = trajectories.iter().map(|(_, t)| t.clone()).collect();
        let aggregate = if done.is_empty() { None } else { Some(aggregate(&done)?) };
        results.push(CellResult {
            noise,
            solver: cfg.kind(),
            params: cfg.params,
            trajectories,
            failures,
            aggregate,
        });
    }
    let result = ExperimentResult { problem, cells: results };
    if let Some(dir) = &config.output_dir {
        write_experiment(&result, dir)?;
    }
    Ok(result)
}

/// Write `<dir>/<cell>/<solver>/trial_<i>.csv`, `<dir>/<cell>/<solver>.csv`
/// and `<dir>/<cell>/plot.py` for every cell, in deterministic order.
pub fn write_experiment(result: &ExperimentResult, dir: &Path) -> Result<Vec<PlotCell>> {
    let mut plot_cells: Vec<PlotCell> = Vec::new();
    for cell in &result.cells {
        let cell_name = cell_dir_name(cell.noise);
        let cell_dir = dir.join(&cell_name);
        let solver_dir = cell_dir.join(cell.solver.name());
        for (trial, t) in &cell.trajectories {
            write_trial_csv(t, &solver_dir.join(format!("trial_{trial}.csv")))?;
        }
        if let Some(series) = &cell.aggregate {
            write_aggregate_csv(series, &cell_dir.join(format!("{}.csv", cell.solver.name())))?;
        }
        match plot_cells.iter_mut().find(|p| p.dir == cell_name) {
            Some(p) => p.solvers.push(cell.solver),
            None => plot_cells.push(PlotCell {
                dir: cell_name,
                noise: cell.noise,
                solvers: vec![cell.solver],
            }),
        }
    }
    for pc in &plot_cells {
        emit_plot_script(PlotMode::Cell, std::slice::from_ref(pc), &dir.join(&pc.dir).join("plot.py"))?;
    }
    Ok(plot_cells)
}

/// Statistics of `acc` across trials at one evaluation count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AggregatePoint {
    pub nevals: u64,
    pub mean: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub min: f64,
    pub max: f64,
}

impl AggregatePoint {
    pub fn is_ordered(&self) -> bool {
        self.min <= self.q25 && self.q25 <= self.median && self.median <= self.q75 && self.q75 <= self.max
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AggregateSeries {
    pub points: Vec<AggregatePoint>,
}

impl AggregateSeries {
    pub fn last(&self) -> Option<&AggregatePoint> {
        self.points.last()
    }
}

/// Quantile by linear interpolation between order statistics of a sorted
/// slice (position `(m - 1) p`).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Align trials on the union of their logged evaluation counts (each trial
/// contributes its last value at or before every grid point) and summarize.
/// The result does not depend on the order of `trials`.
pub fn aggregate(trials: &[Trajectory]) -> Result<AggregateSeries> {
    if trials.is_empty() {
        return Err(invalid("cannot aggregate zero trajectories"));
    }
    let mut grid: Vec<u64> = trials.iter().flat_map(|t| t.records.iter().map(|r| r.nevals)).collect();
    grid.sort_unstable();
    grid.dedup();
    let mut points = Vec::with_capacity(grid.len());
    let mut vals = Vec::with_capacity(trials.len());
    for &g in &grid {
        vals.clear();
        vals.extend(trials.iter().filter_map(|t| t.at_evals(g).map(|r| r.acc)));
        if vals.is_empty() {
            continue;
        }
        vals.sort_by(f64::total_cmp);
        points.push(AggregatePoint {
            nevals: g,
            mean: vals.iter().sum::<f64>() / vals.len() as f64,
            median: quantile_sorted(&vals, 0.5),
            q25: quantile_sorted(&vals, 0.25),
            q75: quantile_sorted(&vals, 0.75),
            min: vals[0],
            max: vals[vals.len() - 1],
        });
    }
    Ok(AggregateSeries { points })
}

/// Mean of `f(x_N) - f*` over trials. Every trial must have logged
/// iteration `iterations`.
pub fn mean_final_accuracy(trials: &[Trajectory], iterations: u64) -> Result<f64> {
    if trials.is_empty() {
        return Err(invalid("no trials"));
    }
    let mut sum = 0.0;
    for (i, t) in trials.iter().enumerate() {
        sum += t
            .accuracy_at_iteration(iterations)
            .ok_or_else(|| invalid(format!("trial {i} did not reach iteration {iterations}")))?;
    }
    Ok(sum / trials.len() as f64)
}
