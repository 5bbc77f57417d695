//! Browser demo: JSON-returning wrappers around `stars-core` for the static
//! page in `www/`. Each exported function has a plain Rust twin that the
//! tests call directly.

use serde_json::{json, Value};
use stars_core::estimation::box_points;
use stars_core::harness::aggregate;
use stars_core::rng::gaussian_vector;
use stars_core::theory::{self, TheoryBounds};
use stars_core::{Lane, NoiseKind, NoiseModel, NoisyOracle, ProblemSpec, RngStream, SolverConfig, SolverParams};
use wasm_bindgen::prelude::*;

/// Upper limits so a click cannot freeze the tab.
const MAX_N: usize = 64;
const MAX_BUDGET: u64 = 200_000;
const MAX_SEEDS: u64 = 50;
const MAX_SAMPLES: usize = 20_000;

fn noise_kind(name: &str) -> Result<NoiseKind, String> {
    name.parse().map_err(|e: stars_core::Error| e.to_string())
}

fn check_n(n: usize) -> Result<(), String> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be in 2..={MAX_N}"))
    }
}

/// Bound and measured mean squared forward-difference error on f1 over a
/// log grid of smoothing stepsizes around `mu*`.
pub fn fd_error_curve(sigma_a: f64, n: usize, points: usize, samples: usize, seed: u64) -> Result<Value, String> {
    check_n(n)?;
    if !(2..=200).contains(&points) || samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("points must be in 2..=200 and samples in 1..={MAX_SAMPLES}"));
    }
    let p = ProblemSpec::by_name("f1", n).map_err(|e| e.to_string())?;
    let mu_star = theory::mu_star_additive(sigma_a, p.l1, n).map_err(|e| e.to_string())?;
    let noise = NoiseModel::additive(sigma_a).map_err(|e| e.to_string())?;
    let mut oracle = NoisyOracle::new(p.clone(), noise, RngStream::new(seed, 0)).map_err(|e| e.to_string())?;
    let mut dirs = RngStream::with_lane(seed, 0, Lane::Directions);
    let x = box_points(&mut RngStream::with_lane(seed, 0, Lane::Estimation), &p.x0, 1.0, 1).remove(0);
    let grad = p.grad(x.as_slice());

    let mut mus = Vec::with_capacity(points);
    let mut bound = Vec::with_capacity(points);
    let mut measured = Vec::with_capacity(points);
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let mu = mu_star * 10f64.powf(2.0 * t - 1.0);
        let mut sum = 0.0;
        for _ in 0..samples {
            let u = gaussian_vector(&mut dirs, n).map_err(|e| e.to_string())?;
            let f_plus = oracle.eval(x.add_scaled(mu, &u).as_slice()).map_err(|e| e.to_string())?;
            let f_base = oracle.eval(x.as_slice()).map_err(|e| e.to_string())?;
            let d = (f_plus - f_base) / mu - grad.dot(&u);
            sum += d * d * u.norm_sq();
        }
        mus.push(mu);
        bound.push(theory::fd_error_bound_additive(mu, sigma_a, p.l1, n).map_err(|e| e.to_string())?);
        measured.push(sum / samples as f64);
    }
    Ok(json!({
        "mu_star": mu_star,
        "bound_at_mu_star": theory::fd_error_bound_at_optimum(sigma_a, p.l1, n).map_err(|e| e.to_string())?,
        "mu": mus,
        "bound": bound,
        "measured": measured,
    }))
}

/// Median and quartiles of the accuracy of STARS and RG on f1.
pub fn compare_runs(noise: &str, sigma: f64, n: usize, budget: u64, seeds: u64, seed0: u64) -> Result<Value, String> {
    check_n(n)?;
    if budget > MAX_BUDGET || seeds == 0 || seeds > MAX_SEEDS {
        return Err(format!("budget must be <= {MAX_BUDGET} and seeds in 1..={MAX_SEEDS}"));
    }
    let p = ProblemSpec::by_name("f1", n).map_err(|e| e.to_string())?;
    let noise = NoiseModel::new(noise_kind(noise)?, sigma).map_err(|e| e.to_string())?;
    let mut curves = serde_json::Map::new();
    for params in [SolverParams::stars(&p, noise), SolverParams::rg(&p)] {
        let mut cfg = SolverConfig::with_budget(params, budget);
        cfg.record_stride = (budget / 400).max(1);
        let mut trials = Vec::new();
        let mut aborted = 0;
        for trial in 0..seeds {
            match stars_core::run(&cfg, &p, noise, seed0, trial) {
                Ok(t) => trials.push(t),
                Err(_) => aborted += 1,
            }
        }
        let series = if trials.is_empty() {
            Value::Null
        } else {
            let s = aggregate(&trials).map_err(|e| e.to_string())?;
            json!({
                "nevals": s.points.iter().map(|q| q.nevals).collect::<Vec<_>>(),
                "median": s.points.iter().map(|q| q.median).collect::<Vec<_>>(),
                "q25": s.points.iter().map(|q| q.q25).collect::<Vec<_>>(),
                "q75": s.points.iter().map(|q| q.q75).collect::<Vec<_>>(),
            })
        };
        curves.insert(params.kind().name().into(), json!({ "series": series, "aborted": aborted }));
    }
    Ok(Value::Object(curves))
}

/// Theory bounds for f1. `m` is only used for relative noise; pass a
/// non-positive value to use `max(|f(x0)|, |f*|)`.
pub fn bounds_table(noise: &str, sigma: f64, n: usize, m: f64) -> Result<Value, String> {
    check_n(n)?;
    let p = ProblemSpec::by_name("f1", n).map_err(|e| e.to_string())?;
    let b = match noise_kind(noise)? {
        NoiseKind::Additive => TheoryBounds::additive(sigma, p.l1, n, p.r2),
        NoiseKind::Multiplicative => {
            let m = if m > 0.0 { m } else { p.eval(p.x0.as_slice()).abs().max(p.f_star.abs()) };
            TheoryBounds::multiplicative(sigma, p.l0, p.l1, n, p.r2, m)
        }
    }
    .map_err(|e| e.to_string())?;
    let mut rows = vec![
        json!(["mu coefficient", b.mu_coefficient]),
        json!(["h", b.h]),
        json!(["eps_pred", b.eps_pred]),
        json!(["N", b.iterations]),
    ];
    rows.extend(b.constants.iter().map(|(k, v)| json!([k, v])));
    Ok(json!({ "noise": b.noise.short_name(), "sigma": b.sigma, "n": b.n, "rows": rows }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = fdErrorCurve)]
pub fn fd_error_curve_js(sigma_a: f64, n: usize, points: usize, samples: usize, seed: u32) -> Result<String, JsValue> {
    to_js(fd_error_curve(sigma_a, n, points, samples, u64::from(seed)))
}

#[wasm_bindgen(js_name = compareRuns)]
pub fn compare_runs_js(noise: &str, sigma: f64, n: usize, budget: u32, seeds: u32, seed0: u32) -> Result<String, JsValue> {
    to_js(compare_runs(noise, sigma, n, u64::from(budget), u64::from(seeds), u64::from(seed0)))
}

#[wasm_bindgen(js_name = boundsTable)]
pub fn bounds_table_js(noise: &str, sigma: f64, n: usize, m: f64) -> Result<String, JsValue> {
    to_js(bounds_table(noise, sigma, n, m))
}
