use super::{EsParams, Solver, SolverKind, SolverState};
use crate::error::{Error, Result};
use crate::noise::NoisyOracle;
use crate::rng::gaussian_vector;

/// Success probability behind the step-size rule.
pub const ES_SUCCESS_PROBABILITY: f64 = 0.27;
/// Mutation-strength multiplier after an accepted step (`e^{1/3}` to four places).
pub const ES_SUCCESS_FACTOR: f64 = 1.3956;
/// Mutation-strength multiplier after a rejected step.
pub const ES_FAILURE_FACTOR: f64 = 0.8840;

/// Elitist (1+1) evolution strategy. Parent and offspring are both evaluated
/// afresh each iteration; the offspring wins ties.
#[derive(Clone, Debug)]
pub struct OnePlusOneEs {
    params: EsParams,
    state: SolverState,
}

impl OnePlusOneEs {
    pub fn new(params: EsParams, mut state: SolverState) -> Result<Self> {
        if !(params.sigma0 > 0.0) || !(params.c_s > 1.0) || !(params.c_f > 0.0 && params.c_f < 1.0) {
            return Err(Error::ConfigRejected(format!(
                "ES needs sigma0 > 0, c_s > 1 and 0 < c_f < 1 (got {}, {}, {})",
                params.sigma0, params.c_s, params.c_f
            )));
        }
        state.es_sigma = Some(params.sigma0);
        Ok(Self { params, state })
    }

    /// Accept the offspring when its value is no worse than the parent's.
    pub fn accepts(parent: f64, offspring: f64) -> bool {
        offspring <= parent
    }
}

impl Solver for OnePlusOneEs {
    fn kind(&self) -> SolverKind {
        SolverKind::Es
    }

    fn init_cost(&self) -> u64 {
        0
    }

    fn min_step_cost(&self) -> u64 {
        2
    }

    fn init(&mut self, _oracle: &mut NoisyOracle) -> Result<()> {
        Ok(())
    }

    fn step(&mut self, oracle: &mut NoisyOracle, _allowance: u64) -> Result<()> {
        let st = &mut self.state;
        let sigma = st.es_sigma.unwrap_or(self.params.sigma0);
        let u = gaussian_vector(&mut st.rng, st.x.dim())?;
        let candidate = st.x.add_scaled(sigma, &u);
        let f_parent = oracle.eval(&st.x)?;
        let f_child = oracle.eval(&candidate)?;
        let next_sigma = if Self::accepts(f_parent, f_child) {
            st.x = candidate;
            sigma * self.params.c_s
        } else {
            sigma * self.params.c_f
        };
        if !st.x.is_finite() || !next_sigma.is_finite() {
            return Err(Error::NonFiniteStep { iteration: st.k + 1 });
        }
        st.es_sigma = Some(next_sigma);
        st.k += 1;
        st.last_mu = Some(sigma);
        st.last_step_evals = 2;
        Ok(())
    }

    fn state(&self) -> &SolverState {
        &self.state
    }
}
