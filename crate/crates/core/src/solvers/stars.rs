use super::{forward_difference_step, Solver, SolverKind, SolverState, StarsParams};
use crate::error::{Error, Result};
use crate::noise::{NoiseKind, NoisyOracle};
use crate::rng::gaussian_vector;
use crate::theory;

/// How the smoothing stepsize is chosen each iteration.
#[derive(Clone, Copy, Debug)]
enum Smoothing {
    /// `mu*` for additive noise, fixed for the whole run.
    Fixed(f64),
    /// `max(C4 sqrt(|f~(x_k)|), mu_min)` from one fresh evaluation per step.
    Relative { c4: f64, mu_min: f64 },
}

/// Random search whose forward-difference stepsize is tuned to the noise
/// level. The noisy value at the current iterate is carried over from the
/// previous step, so a step costs two evaluations (three with relative
/// noise, which spends one more on the stepsize).
#[derive(Clone, Debug)]
pub struct Stars {
    smoothing: Smoothing,
    h: f64,
    state: SolverState,
}

impl Stars {
    pub fn new(params: StarsParams, n: usize, state: SolverState) -> Result<Self> {
        let reject = |e: Error| Error::ConfigRejected(format!("STARS: {e}"));
        let smoothing = match params.noise_kind {
            NoiseKind::Additive => Smoothing::Fixed(theory::mu_star_additive(params.sigma, params.l1, n).map_err(reject)?),
            NoiseKind::Multiplicative => {
                if !(params.mu_min > 0.0) {
                    return Err(Error::ConfigRejected("STARS: mu_min must be > 0".into()));
                }
                Smoothing::Relative {
                    c4: theory::c4(params.sigma, params.l1, n).map_err(reject)?,
                    mu_min: params.mu_min,
                }
            }
        };
        Ok(Self {
            smoothing,
            h: theory::step_length(params.l1, n),
            state,
        })
    }

    pub fn step_length(&self) -> f64 {
        self.h
    }

    /// The fixed `mu*` (additive) or `C4` (relative).
    pub fn mu_coefficient(&self) -> f64 {
        match self.smoothing {
            Smoothing::Fixed(mu) => mu,
            Smoothing::Relative { c4, .. } => c4,
        }
    }
}

impl Solver for Stars {
    fn kind(&self) -> SolverKind {
        SolverKind::Stars
    }

    fn init_cost(&self) -> u64 {
        1
    }

    fn min_step_cost(&self) -> u64 {
        match self.smoothing {
            Smoothing::Fixed(_) => 2,
            Smoothing::Relative { .. } => 3,
        }
    }

    fn init(&mut self, oracle: &mut NoisyOracle) -> Result<()> {
        self.state.cached_f_noisy = Some(oracle.eval(&self.state.x)?);
        Ok(())
    }

    fn step(&mut self, oracle: &mut NoisyOracle, _allowance: u64) -> Result<()> {
        let st = &mut self.state;
        let before = oracle.eval_count();
        let f_base = match st.cached_f_noisy {
            Some(v) => v,
            None => oracle.eval(&st.x)?,
        };
        let u = gaussian_vector(&mut st.rng, st.x.dim())?;
        let mu = match self.smoothing {
            Smoothing::Fixed(mu) => mu,
            Smoothing::Relative { c4, mu_min } => theory::mu_tilde(c4, oracle.eval(&st.x)?, mu_min),
        };
        let f_plus = oracle.eval(&st.x.add_scaled(mu, &u))?;
        let next = forward_difference_step(&st.x, &u, f_plus, f_base, mu, self.h, st.k)?;
        st.cached_f_noisy = Some(oracle.eval(&next)?);
        st.x = next;
        st.k += 1;
        st.last_mu = Some(mu);
        st.last_step_evals = oracle.eval_count() - before;
        Ok(())
    }

    fn state(&self) -> &SolverState {
        &self.state
    }
}
