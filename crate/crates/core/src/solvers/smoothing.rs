use super::{forward_difference_step, RgParams, RsgfParams, SsParams, Solver, SolverKind, SolverState};
use crate::error::{Error, Result};
use crate::noise::NoisyOracle;
use crate::rng::gaussian_vector;
use crate::theory;

/// Gaussian random search with a fixed smoothing stepsize and fixed step
/// length, evaluating both points afresh every iteration. RG, SS and RSGF
/// differ only in how the two constants are chosen.
#[derive(Clone, Debug)]
pub struct FixedSmoothing {
    kind: SolverKind,
    mu: f64,
    h: f64,
    measure_f0: bool,
    rsgf: Option<(RsgfParams, u64, usize)>,
    state: SolverState,
}

fn rejected(kind: SolverKind, e: Error) -> Error {
    Error::ConfigRejected(format!("{kind}: {e}"))
}

impl FixedSmoothing {
    /// Accuracy-targeted smoothing `mu = 5/(3(n+4)) sqrt(eps/(2 L1))` with
    /// step `1/(4 L1 (n+4))`.
    pub fn rg(p: RgParams, n: usize, state: SolverState) -> Result<Self> {
        let mu = theory::rg_mu(p.epsilon, p.l1, n).map_err(|e| rejected(SolverKind::Rg, e))?;
        Ok(Self::with(SolverKind::Rg, mu, theory::step_length(p.l1, n), state))
    }

    /// `h = R/((n+4) sqrt(N+1) L0)`, `mu = eps/(2 L0 sqrt(n))`.
    pub fn ss(p: SsParams, iterations: u64, n: usize, state: SolverState) -> Result<Self> {
        let e = |e| rejected(SolverKind::Ss, e);
        let h = theory::ss_step_length(p.r2.sqrt(), n, iterations, p.l0).map_err(e)?;
        let mu = theory::ss_mu(p.epsilon, p.l0, n).map_err(e)?;
        Ok(Self::with(SolverKind::Ss, mu, h, state))
    }

    /// Fixed `mu` with step `gamma` from the estimated constants. When `f0`
    /// is not given it is measured at initialization.
    pub fn rsgf(p: RsgfParams, iterations: u64, n: usize, state: SolverState) -> Result<Self> {
        if !(p.mu > 0.0) {
            return Err(rejected(SolverKind::Rsgf, crate::error::invalid("mu must be > 0")));
        }
        let mut s = Self::with(SolverKind::Rsgf, p.mu, 0.0, state);
        match p.f0 {
            Some(f0) => s.h = theory::rsgf_gamma(p.l1_est, p.sigma_est, f0, n, iterations, p.r2).map_err(|e| rejected(SolverKind::Rsgf, e))?,
            None => {
                // Validate now; gamma is fixed once f0 is measured.
                theory::rsgf_gamma(p.l1_est, p.sigma_est, 0.0, n, iterations, p.r2).map_err(|e| rejected(SolverKind::Rsgf, e))?;
                s.measure_f0 = true;
            }
        }
        s.rsgf = Some((p, iterations, n));
        Ok(s)
    }

    fn with(kind: SolverKind, mu: f64, h: f64, state: SolverState) -> Self {
        Self {
            kind,
            mu,
            h,
            measure_f0: false,
            rsgf: None,
            state,
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn step_length(&self) -> f64 {
        self.h
    }
}

impl Solver for FixedSmoothing {
    fn kind(&self) -> SolverKind {
        self.kind
    }

    fn init_cost(&self) -> u64 {
        u64::from(self.measure_f0)
    }

    fn min_step_cost(&self) -> u64 {
        2
    }

    fn init(&mut self, oracle: &mut NoisyOracle) -> Result<()> {
        if self.measure_f0 {
            let f0 = oracle.eval(&self.state.x)?;
            let (p, iterations, n) = self.rsgf.expect("rsgf parameters present");
            self.h = theory::rsgf_gamma(p.l1_est, p.sigma_est, f0, n, iterations, p.r2)?;
        }
        Ok(())
    }

    fn step(&mut self, oracle: &mut NoisyOracle, _allowance: u64) -> Result<()> {
        let st = &mut self.state;
        let before = oracle.eval_count();
        let u = gaussian_vector(&mut st.rng, st.x.dim())?;
        let f_base = oracle.eval(&st.x)?;
        let f_plus = oracle.eval(&st.x.add_scaled(self.mu, &u))?;
        st.x = forward_difference_step(&st.x, &u, f_plus, f_base, self.mu, self.h, st.k)?;
        st.k += 1;
        st.last_mu = Some(self.mu);
        st.last_step_evals = oracle.eval_count() - before;
        Ok(())
    }

    fn state(&self) -> &SolverState {
        &self.state
    }
}
