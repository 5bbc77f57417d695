//! The three fixed experiment protocols: noise invariance against RG
//! (`fig1`), predicted versus achieved accuracy across dimensions (`fig2`)
//! and the six-solver comparison (`fig3`).

use std::fmt::Write as _;
use std::path::PathBuf;

use super::{
    emit_plot_script, mean_final_accuracy, run_experiment, write_experiment, ExperimentConfig, ExperimentResult, PlotCell, PlotMode,
    RunLimit,
};
use crate::error::{Error, Result};
use crate::noise::{NoiseKind, NoiseModel};
use crate::problems::ProblemSpec;
use crate::solvers::{SolverKind, Trajectory, DEFAULT_SS_EPSILON};
use crate::theory;

pub const FIG1_SIGMAS: [f64; 2] = [1e-6, 1e-3];
pub const FIG1_BUDGET: u64 = 2000;
pub const FIG3_SIGMAS: [f64; 3] = [1e-5, 1e-3, 1e-1];
pub const FIG3_BUDGET: u64 = 10_000;
pub const FIG3_STRIDE: u64 = 10;
pub const FIG2_DIMS: [usize; 3] = [8, 16, 32];
/// `(sigma_a, sigma_r)` pairs. The relative run gets the evaluation budget of
/// its additive partner at the same dimension.
pub const FIG2_PAIRS: [(f64, f64); 2] = [(1e-2, 1e-4), (1e-4, 1e-6)];
/// Roughly this many records are kept per fig2 trial.
pub const FIG2_RECORDS: u64 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct FigureOptions {
    pub seeds: u64,
    pub seed0: u64,
    /// Evaluation budget for fig1 and fig3.
    pub budget: Option<u64>,
    pub record_stride: Option<u64>,
    /// Dimensions for fig2.
    pub dims: Option<Vec<usize>>,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl FigureOptions {
    pub fn with_seeds(seeds: u64) -> Self {
        Self {
            seeds,
            seed0: 0,
            budget: None,
            record_stride: None,
            dims: None,
            workers: None,
            output_dir: None,
        }
    }
}

/// One fig2 point: predicted and achieved mean accuracy for a dimension and
/// noise level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fig2Row {
    pub noise: NoiseModel,
    pub n: usize,
    pub iterations: u64,
    pub evals: u64,
    pub eps_pred: f64,
    pub eps_actual: f64,
    /// Post-hoc bound on the mean `|f(x_k)|` (relative noise only).
    pub m_posthoc: Option<f64>,
    pub failures: usize,
}

#[derive(Clone, Debug, Default)]
pub struct FigureReport {
    pub experiments: Vec<ExperimentResult>,
    pub fig2: Vec<Fig2Row>,
}

fn grid_figure(opts: &FigureOptions, sigmas: &[f64], solvers: &[SolverKind], default_budget: u64, default_stride: u64, mode: PlotMode) -> Result<FigureReport> {
    let mut report = FigureReport::default();
    let mut plot_cells: Vec<PlotCell> = Vec::new();
    for kind in [NoiseKind::Additive, NoiseKind::Multiplicative] {
        let mut cfg = ExperimentConfig::new("f1", 8, kind, sigmas.to_vec(), solvers.to_vec(), RunLimit::Evals(opts.budget.unwrap_or(default_budget)));
        cfg.seeds = opts.seeds;
        cfg.seed0 = opts.seed0;
        cfg.record_stride = opts.record_stride.unwrap_or(default_stride);
        cfg.ss_epsilon = DEFAULT_SS_EPSILON;
        cfg.workers = opts.workers;
        let result = run_experiment(&cfg)?;
        if let Some(dir) = &opts.output_dir {
            plot_cells.extend(write_experiment(&result, dir)?);
        }
        report.experiments.push(result);
    }
    if let Some(dir) = &opts.output_dir {
        emit_plot_script(mode, &plot_cells, &dir.join("figure.py"))?;
    }
    Ok(report)
}

/// STARS and RG on f1 (n = 8) at two noise levels per noise kind.
pub fn fig1(opts: &FigureOptions) -> Result<FigureReport> {
    grid_figure(opts, &FIG1_SIGMAS, &[SolverKind::Stars, SolverKind::Rg], FIG1_BUDGET, 1, PlotMode::Fig1)
}

/// All six solvers on f1 (n = 8) at three noise levels per noise kind.
pub fn fig3(opts: &FigureOptions) -> Result<FigureReport> {
    grid_figure(opts, &FIG3_SIGMAS, &SolverKind::ALL, FIG3_BUDGET, FIG3_STRIDE, PlotMode::Fig3)
}

/// Largest per-trial mean of `|f(x_k)|` over the logged iterates.
fn posthoc_m(trials: &[&Trajectory]) -> f64 {
    trials
        .iter()
        .filter(|t| !t.records.is_empty())
        .map(|t| t.records.iter().map(|r| r.f_true.abs()).sum::<f64>() / t.records.len() as f64)
        .fold(0.0, f64::max)
}

fn stars_cell(n: usize, noise: NoiseModel, limit: RunLimit, stride: u64, opts: &FigureOptions) -> Result<ExperimentResult> {
    let mut cfg = ExperimentConfig::new("f1", n, noise.kind, vec![noise.sigma], vec![SolverKind::Stars], limit);
    cfg.seeds = opts.seeds;
    cfg.seed0 = opts.seed0;
    cfg.record_stride = stride;
    cfg.workers = opts.workers;
    let result = run_experiment(&cfg)?;
    if let Some(dir) = &opts.output_dir {
        write_experiment(&result, &dir.join(format!("n{n}")))?;
    }
    Ok(result)
}

fn completed(result: &ExperimentResult) -> (Vec<&Trajectory>, usize) {
    let cell = &result.cells[0];
    (cell.trajectories.iter().map(|(_, t)| t).collect(), cell.failures.len())
}

/// STARS on f1 under additive noise for `iteration_budget_additive` iterations.
pub fn fig2_additive(n: usize, sigma_a: f64, opts: &FigureOptions) -> Result<(Fig2Row, ExperimentResult)> {
    let problem = ProblemSpec::by_name("f1", n)?;
    let eps_pred = theory::eps_pred_additive(sigma_a, n);
    let iters = theory::iteration_budget_additive(n, problem.l1, problem.r2, eps_pred)?;
    let stride = opts.record_stride.unwrap_or((iters / FIG2_RECORDS).max(1));
    let noise = NoiseModel::additive(sigma_a)?;
    let result = stars_cell(n, noise, RunLimit::Iterations(iters), stride, opts)?;
    let (trials, failures) = completed(&result);
    let owned: Vec<Trajectory> = trials.iter().map(|t| (*t).clone()).collect();
    let row = Fig2Row {
        noise,
        n,
        iterations: iters,
        evals: 2 * iters + 1,
        eps_pred,
        eps_actual: mean_final_accuracy(&owned, iters)?,
        m_posthoc: None,
        failures,
    };
    Ok((row, result))
}

/// STARS on f1 under relative noise with a fixed evaluation budget. The
/// predicted accuracy uses the post-hoc mean `|f(x_k)|` as `M`.
pub fn fig2_multiplicative(n: usize, sigma_r: f64, evals: u64, opts: &FigureOptions) -> Result<(Fig2Row, ExperimentResult)> {
    let problem = ProblemSpec::by_name("f1", n)?;
    let noise = NoiseModel::multiplicative(sigma_r)?;
    let iters = evals.saturating_sub(1) / 3;
    let stride = opts.record_stride.unwrap_or((iters / FIG2_RECORDS).max(1));
    let result = stars_cell(n, noise, RunLimit::Evals(evals), stride, opts)?;
    let (trials, failures) = completed(&result);
    let owned: Vec<Trajectory> = trials.iter().map(|t| (*t).clone()).collect();
    let m = posthoc_m(&trials);
    let b = theory::snr_bound_uniform(sigma_r)?;
    let eps_pred = if m > 0.0 {
        theory::eps_pred_multiplicative(sigma_r, n, b, m, problem.l0, problem.l1)?
    } else {
        f64::NAN
    };
    let row = Fig2Row {
        noise,
        n,
        iterations: iters,
        evals,
        eps_pred,
        eps_actual: mean_final_accuracy(&owned, iters)?,
        m_posthoc: Some(m),
        failures,
    };
    Ok((row, result))
}

/// STARS on f1 for each dimension: additive runs use the theoretical
/// iteration budget `N`; relative runs get the same number of evaluations
/// as the paired additive run.
pub fn fig2(opts: &FigureOptions) -> Result<FigureReport> {
    let dims = opts.dims.clone().unwrap_or_else(|| FIG2_DIMS.to_vec());
    let mut report = FigureReport::default();
    for &n in &dims {
        for (sigma_a, sigma_r) in FIG2_PAIRS {
            let (add, result) = fig2_additive(n, sigma_a, opts)?;
            report.fig2.push(add);
            report.experiments.push(result);
            let (mult, result) = fig2_multiplicative(n, sigma_r, add.evals, opts)?;
            report.fig2.push(mult);
            report.experiments.push(result);
        }
    }
    if let Some(dir) = &opts.output_dir {
        for kind in [NoiseKind::Additive, NoiseKind::Multiplicative] {
            let mut s = String::from("n,sigma,iterations,evals,eps_pred,eps_actual\n");
            for r in report.fig2.iter().filter(|r| r.noise.kind == kind) {
                let _ = writeln!(s, "{},{:?},{},{},{:?},{:?}", r.n, r.noise.sigma, r.iterations, r.evals, r.eps_pred, r.eps_actual);
            }
            let path = dir.join(format!("fig2_{}.csv", kind.short_name()));
            std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
            std::fs::write(&path, s).map_err(|source| Error::Io { path, source })?;
        }
        emit_plot_script(PlotMode::Fig2, &[], &dir.join("figure.py"))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fig1_writes_the_layout() {
        let dir = tempfile::tempdir().unwrap();
        let mut opts = FigureOptions::with_seeds(2);
        opts.budget = Some(50);
        opts.output_dir = Some(dir.path().to_path_buf());
        let r = fig1(&opts).unwrap();
        assert_eq!(r.experiments.len(), 2);
        for cell in ["add_1e-6", "add_1e-3", "mult_1e-6", "mult_1e-3"] {
            for solver in ["stars", "rg"] {
                assert!(dir.path().join(cell).join(format!("{solver}.csv")).exists());
                assert!(dir.path().join(cell).join(solver).join("trial_1.csv").exists());
            }
            assert!(dir.path().join(cell).join("plot.py").exists());
        }
        assert!(dir.path().join("figure.py").exists());
    }

    #[test]
    fn fig2_uses_the_theoretical_budget() {
        let mut opts = FigureOptions::with_seeds(1);
        opts.dims = Some(vec![2]);
        let r = fig2(&opts).unwrap();
        assert_eq!(r.fig2.len(), 4);
        let add = r.fig2[0];
        let problem = ProblemSpec::by_name("f1", 2).unwrap();
        let eps = theory::eps_pred_additive(1e-2, 2);
        assert_eq!(add.iterations, theory::iteration_budget_additive(2, problem.l1, problem.r2, eps).unwrap());
        let mult = r.fig2[1];
        assert_eq!(mult.evals, add.evals);
        assert_eq!(mult.iterations, (add.evals - 1) / 3);
        assert!(mult.m_posthoc.unwrap() > 0.0);
    }
}
