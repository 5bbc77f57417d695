//! Closed-form values checked against mpmath references
//! (tests/oracles/theory_values.py, 40 digits).

#![allow(clippy::excessive_precision)]

use stars_core::theory::*;

fn close(got: f64, want: f64, rel: f64) {
    assert!(((got - want) / want).abs() <= rel, "got {got:e}, want {want:e}");
}

#[test]
fn additive_stepsize_and_bound() {
    close(mu_star_additive(1e-3, 4.0, 8).unwrap(), 0.006179011038674443603, 1e-12);
    close(mu_star_additive(1.0, 1.0, 2).unwrap(), 0.4204482076268572715, 1e-12);
    close(fd_error_bound_at_optimum(1e-3, 4.0, 8).unwrap(), 0.8381312546373628704, 1e-12);
    let mu = mu_star_additive(1e-3, 4.0, 8).unwrap();
    close(fd_error_bound_additive(mu, 1e-3, 4.0, 8).unwrap(), 0.8381312546373628704, 1e-12);
}

#[test]
fn step_length_floor_and_budget() {
    assert_eq!(step_length(4.0, 8), 1.0 / 192.0);
    close(eps_pred_additive(1e-3, 8), 0.02036467529817256870, 1e-12);
    close(eps_pred_additive(1e-2, 32), 0.6109402589451770611, 1e-12);
    let eps = eps_pred_additive(1e-3, 8);
    assert_eq!(iteration_budget_additive(8, 4.0, 3.0, eps).unwrap(), 56568);
}

#[test]
fn multiplicative_constants() {
    close(c4(1e-3, 4.0, 8).unwrap(), 0.007348118379789417125, 1e-12);
    close(snr_bound_uniform(0.1).unwrap(), 1.010183949409522634, 1e-12);
    close(snr_bound_uniform(1e-3).unwrap(), 1.000001000001800004, 1e-12);
    close(c9(1.0, 1.0, 1.0, 4.0), 6.220671475544960866, 1e-12);
    close(mu_tilde(0.00735, 0.444, DEFAULT_MU_MIN), 0.004897549387193558460, 1e-12);
}

#[test]
fn baseline_stepsizes() {
    close(rg_mu(2f64.powi(-16), 4.0, 8).unwrap(), 1.918149905562466158e-4, 1e-12);
    close(rg_mu(0.1, 4.0, 8).unwrap(), 0.01552824984374853956, 1e-12);
    close(ss_mu(0.1, 5.0, 8).unwrap(), 0.003535533905932737622, 1e-12);
    close(ss_step_length(3f64.sqrt(), 8, 9_999, 5.0).unwrap(), 2.886751345948128823e-4, 1e-12);
}
