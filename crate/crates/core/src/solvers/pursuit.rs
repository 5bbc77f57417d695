use super::{golden_section, RpParams, Solver, SolverKind, SolverState};
use crate::error::{Error, Result};
use crate::noise::NoisyOracle;
use crate::rng::gaussian_vector;

/// Random pursuit: pick a uniformly random unit direction and move to the
/// (approximate) minimizer of the noisy function along it.
///
/// The line search is golden-section over `t in [-span, span]`, stopping at
/// bracket width `line_search_accuracy`. Its probes are the step's cost, so
/// the per-step evaluation count is variable.
#[derive(Clone, Debug)]
pub struct RandomPursuit {
    params: RpParams,
    state: SolverState,
}

impl RandomPursuit {
    pub fn new(params: RpParams, state: SolverState) -> Result<Self> {
        if !(params.line_search_span > 0.0) || !(params.line_search_accuracy > 0.0) {
            return Err(Error::ConfigRejected("RP needs positive line-search span and accuracy".into()));
        }
        Ok(Self { params, state })
    }
}

impl Solver for RandomPursuit {
    fn kind(&self) -> SolverKind {
        SolverKind::Rp
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

    fn step(&mut self, oracle: &mut NoisyOracle, allowance: u64) -> Result<()> {
        let st = &mut self.state;
        let g = gaussian_vector(&mut st.rng, st.x.dim())?;
        let u = g.scaled(1.0 / g.norm());
        let x = &st.x;
        let span = self.params.line_search_span;
        let out = golden_section(|t| oracle.eval(&x.add_scaled(t, &u)), -span, span, self.params.line_search_accuracy, allowance)?;
        let next = st.x.add_scaled(out.t, &u);
        if !next.is_finite() {
            return Err(Error::NonFiniteStep { iteration: st.k + 1 });
        }
        st.x = next;
        st.k += 1;
        st.last_step_evals = out.probes;
        Ok(())
    }

    fn state(&self) -> &SolverState {
        &self.state
    }
}
