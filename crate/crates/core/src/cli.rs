//! The `stars` command line: theory bounds, ad-hoc runs, the three figure
//! protocols and the estimators.
//!
//! Exit codes: 0 success, 1 configuration error (including bad flags),
//! 2 runtime abort.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::estimation::{self, DEFAULT_FD_STEP, DEFAULT_SAA_SAMPLES};
use crate::harness::{self, ExperimentConfig, FigureOptions, FigureReport, RunLimit};
use crate::noise::{NoiseKind, NoiseModel, NoisyOracle};
use crate::problems::ProblemSpec;
use crate::rng::{Lane, RngStream};
use crate::solvers::{SolverKind, DEFAULT_RSGF_MU, DEFAULT_SS_EPSILON};
use crate::theory::TheoryBounds;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "stars", version, about = "Noise-adjusted zero-order optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print step sizes, accuracy floor, iteration budget and constants.
    Bounds(BoundsArgs),
    /// Run solvers over a grid of noise levels and write CSVs.
    Run(RunArgs),
    /// STARS vs RG on f1 (n = 8), two noise levels per noise kind.
    Fig1(FigArgs),
    /// Predicted vs achieved STARS accuracy for n in {8, 16, 32}.
    Fig2(FigArgs),
    /// All six solvers on f1 (n = 8), three noise levels per noise kind.
    Fig3(FigArgs),
    /// Estimate noise level, L1 and gradient-estimate variance.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug)]
struct ProblemArgs {
    #[arg(long, default_value = "f1")]
    problem: String,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value = "add")]
    noise: NoiseKind,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    sigma: f64,
    /// Bound on the mean |f(x_k)| for relative noise. Defaults to
    /// max(|f(x0)|, |f*|).
    #[arg(long)]
    m: Option<f64>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "stars")]
    solver: Vec<SolverKind>,
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed0: u64,
    /// Evaluation budget per trial.
    #[arg(long, conflicts_with = "iters", required_unless_present = "iters")]
    budget: Option<u64>,
    /// Iteration limit per trial.
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long, default_value_t = 1)]
    stride: u64,
    #[arg(long, default_value_t = DEFAULT_SS_EPSILON)]
    ss_epsilon: f64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FigArgs {
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed0: u64,
    /// Evaluation budget (fig1 and fig3).
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    stride: Option<u64>,
    /// Dimensions (fig2).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum At {
    X0,
    Xstar,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Point for the noise-level estimate.
    #[arg(long, value_enum, default_value_t = At::Xstar)]
    at: At,
    /// Replicates for the noise-level estimate.
    #[arg(long, default_value_t = 10_000)]
    replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SAA_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    fd_step: f64,
    #[arg(long, default_value_t = harness::RSGF_VAR_POINTS)]
    points: usize,
    #[arg(long, default_value_t = harness::RSGF_VAR_DRAWS)]
    draws: usize,
    #[arg(long, default_value_t = DEFAULT_RSGF_MU)]
    mu: f64,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::ConfigRejected(_) => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

/// Parse `args` (including the program name) and run, writing to `out` and
/// `err`. Returns the process exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(args, &mut stdout.lock(), &mut stderr.lock())
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Bounds(a) => bounds(a, out).map(|_| EXIT_OK),
        Command::Run(a) => run(a, out, err),
        Command::Fig1(a) => figure(a, 20, harness::fig1, out, err),
        Command::Fig2(a) => figure(a, 15, harness::fig2, out, err),
        Command::Fig3(a) => figure(a, 20, harness::fig3, out, err),
        Command::Estimate(a) => estimate(a, out).map(|_| EXIT_OK),
    }
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<(), Error> {
    let p = ProblemSpec::by_name(&a.problem.problem, a.problem.n)?;
    NoiseModel::new(a.problem.noise, a.sigma)?;
    let tb = match a.problem.noise {
        NoiseKind::Additive => TheoryBounds::additive(a.sigma, p.l1, p.n, p.r2)?,
        NoiseKind::Multiplicative => {
            let m = a.m.unwrap_or_else(|| p.eval(&p.x0).abs().max(p.f_star.abs()));
            TheoryBounds::multiplicative(a.sigma, p.l0, p.l1, p.n, p.r2, m)?
        }
    };
    let mu_key = match tb.noise {
        NoiseKind::Additive => "mu_star",
        NoiseKind::Multiplicative => "C4",
    };
    let mut rows: Vec<(String, String, String)> = vec![
        ("problem".into(), p.name.clone(), p.name.clone()),
        ("n".into(), p.n.to_string(), p.n.to_string()),
        ("noise".into(), tb.noise.short_name().into(), tb.noise.short_name().into()),
        ("sigma".into(), format!("{:e}", tb.sigma), format!("{:?}", tb.sigma)),
        ("L1".into(), format!("{:e}", p.l1), format!("{:?}", p.l1)),
        ("R2".into(), format!("{:.6e}", p.r2), format!("{:?}", p.r2)),
        (mu_key.into(), format!("{:.6e}", tb.mu_coefficient), format!("{:?}", tb.mu_coefficient)),
        ("h".into(), format!("{:.6e}", tb.h), format!("{:?}", tb.h)),
        ("eps_pred".into(), format!("{:.6e}", tb.eps_pred), format!("{:?}", tb.eps_pred)),
        ("N".into(), tb.iterations.to_string(), tb.iterations.to_string()),
    ];
    for (k, v) in &tb.constants {
        rows.push(((*k).into(), format!("{v:.6e}"), format!("{v:?}")));
    }
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (k, v, _) in &rows {
        writeln!(out, "{k:<width$}  {v}").map_err(io)?;
    }
    let line: Vec<String> = rows.iter().map(|(k, _, v)| format!("{k}={v}")).collect();
    writeln!(out, "{}", line.join(" ")).map_err(io)?;
    Ok(())
}

fn run(a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let limit = match (a.budget, a.iters) {
        (Some(b), _) => RunLimit::Evals(b),
        (None, Some(i)) => RunLimit::Iterations(i),
        (None, None) => unreachable!("clap requires one of --budget/--iters"),
    };
    let mut cfg = ExperimentConfig::new(&a.problem.problem, a.problem.n, a.problem.noise, a.sigma, a.solver, limit);
    cfg.seeds = a.seeds;
    cfg.seed0 = a.seed0;
    cfg.record_stride = a.stride;
    cfg.ss_epsilon = a.ss_epsilon;
    cfg.workers = a.jobs;
    cfg.output_dir = Some(a.out.clone());
    let result = harness::run_experiment(&cfg)?;
    for cell in &result.cells {
        let last = cell.aggregate.as_ref().and_then(|s| s.last().copied());
        match last {
            Some(p) => writeln!(
                out,
                "{:<5} {:<4} sigma={:e}  evals={}  median acc={:e}  mean acc={:e}",
                cell.solver,
                cell.noise.kind.short_name(),
                cell.noise.sigma,
                p.nevals,
                p.median,
                p.mean
            ),
            None => writeln!(out, "{:<5} {:<4} sigma={:e}  no completed trials", cell.solver, cell.noise.kind.short_name(), cell.noise.sigma),
        }
        .map_err(io)?;
    }
    writeln!(out, "wrote {}", a.out.display()).map_err(io)?;
    Ok(report_failures(result.failure_count(), err))
}

fn report_failures(count: usize, err: &mut dyn Write) -> i32 {
    if count == 0 {
        EXIT_OK
    } else {
        let _ = writeln!(err, "warning: {count} trial(s) aborted");
        EXIT_RUNTIME
    }
}

fn figure(
    a: FigArgs,
    default_seeds: u64,
    f: fn(&FigureOptions) -> crate::Result<FigureReport>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let opts = FigureOptions {
        seeds: a.seeds.unwrap_or(default_seeds),
        seed0: a.seed0,
        budget: a.budget,
        record_stride: a.stride,
        dims: a.dims,
        workers: a.jobs,
        output_dir: Some(a.out.clone()),
    };
    let report = f(&opts)?;
    for row in &report.fig2 {
        writeln!(
            out,
            "n={:<3} {:<4} sigma={:e}  iterations={}  eps_pred={:e}  eps_actual={:e}",
            row.n,
            row.noise.kind.short_name(),
            row.noise.sigma,
            row.iterations,
            row.eps_pred,
            row.eps_actual
        )
        .map_err(io)?;
    }
    let mut failures = report.fig2.iter().map(|r| r.failures).sum::<usize>();
    if report.fig2.is_empty() {
        failures = report.experiments.iter().map(|e| e.failure_count()).sum();
        for e in &report.experiments {
            for cell in &e.cells {
                if let Some(p) = cell.aggregate.as_ref().and_then(|s| s.last()) {
                    writeln!(
                        out,
                        "{:<5} {:<4} sigma={:e}  median final acc={:e}",
                        cell.solver,
                        cell.noise.kind.short_name(),
                        cell.noise.sigma,
                        p.median
                    )
                    .map_err(io)?;
                }
            }
        }
    }
    writeln!(out, "wrote {}", a.out.display()).map_err(io)?;
    Ok(report_failures(failures, err))
}

fn estimate(a: EstimateArgs, out: &mut dyn Write) -> Result<(), Error> {
    let p = ProblemSpec::by_name(&a.problem.problem, a.problem.n)?;
    let noise = NoiseModel::new(a.problem.noise, a.sigma)?;
    let mut oracle = NoisyOracle::new(p.clone(), noise, RngStream::with_lane(a.seed, 0, Lane::Estimation))?;
    let x = match a.at {
        At::X0 => p.x0.clone(),
        At::Xstar => p.x_star.clone(),
    };
    let mut show = |name: &str, r: &estimation::EstimateReport| {
        writeln!(out, "{name:<10} value={:e} samples={} dispersion={:e}", r.value, r.sample_count, r.dispersion).map_err(io)
    };
    let sigma = match noise.kind {
        NoiseKind::Additive => estimation::estimate_sigma_additive(&mut oracle, &x, a.replicates)?,
        NoiseKind::Multiplicative => estimation::estimate_sigma_relative(&mut oracle, &x, a.replicates)?,
    };
    show("sigma", &sigma)?;
    let l1 = estimation::estimate_l1_saa(&mut oracle, &p.x0, a.samples, a.fd_step)?;
    show("L1", &l1)?;
    let points = estimation::box_points(&mut RngStream::with_lane(a.seed, 1, Lane::Estimation), &p.x0, 1.0, a.points);
    let mut dirs = RngStream::with_lane(a.seed, 2, Lane::Estimation);
    let var = estimation::estimate_grad_var(&mut oracle, &points, a.mu, a.draws, &mut dirs)?;
    show("grad_var", &var)?;
    writeln!(out, "hessian probe points: {} ({} evaluations)", estimation::hessian_probe_points(p.n), estimation::saa_eval_cost(p.n, a.samples)).map_err(io)?;
    Ok(())
}
