//! Turning a tester for class functions into a tester for all functions.

use rand::Rng;

use super::access::{CorrectedAccess, QueryOracle, ScalarAccess};
use super::config::{checked_mul, Constants, TesterConfig};
use super::conjugacy::conjugacy_rounds;
use super::report::{TesterReport, Trace, Verdict, Witness};
use crate::error::TesterError;

#[derive(Debug, Clone, PartialEq)]
pub enum CoreOutcome {
    Accept,
    Reject(Option<Witness>),
}

/// Unwraps a query, turning a self-corrector witness into a rejection.
macro_rules! or_reject {
    ($query:expr) => {
        match $query {
            Ok(observation) => observation,
            Err(witness) => return Ok(CoreOutcome::Reject(Some(witness))),
        }
    };
}
pub(crate) use or_reject;

/// A tester that is only guaranteed to be sound on class functions.
pub trait ClassFunctionCore {
    fn name(&self) -> &'static str;

    /// Worst-case number of queries made at `epsilon`.
    fn query_bound(&self, epsilon: f64, constants: &Constants) -> Result<u64, TesterError>;

    fn run<A: ScalarAccess, R: Rng + ?Sized>(
        &self,
        access: &mut A,
        epsilon: f64,
        constants: &Constants,
        rng: &mut R,
        trace: &mut Trace,
    ) -> Result<CoreOutcome, TesterError>;
}

/// Self-corrector samples used by the wrapper around `core` at `epsilon`:
/// confidence `1/(6·q(ε/2))` per corrected query.
pub fn wrapper_corrector_samples<C: ClassFunctionCore>(
    core: &C,
    epsilon: f64,
    constants: &Constants,
) -> Result<u64, TesterError> {
    let q = core.query_bound(epsilon / 2.0, constants)?;
    constants.corrector_samples(1.0 / (6.0 * q as f64))
}

/// First tests conjugate invariance at `ε/6`, then runs `core` at `ε/2` on
/// the self-corrected function. A self-corrector witness rejects at once.
pub fn with_class_function_reduction<C: ClassFunctionCore, R: Rng + ?Sized>(
    core: &C,
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    cfg.validate()?;
    let constants = &cfg.constants;
    let start = oracle.count();
    let mut trace = Trace::new(cfg.trace_limit);
    let finish = |oracle: &QueryOracle<'_>, trace, verdict, witness| {
        TesterReport::new(core.name(), cfg.epsilon, cfg.seed, verdict, oracle.count() - start, trace, witness)
    };

    let samples = wrapper_corrector_samples(core, cfg.epsilon, constants)?;
    checked_mul(core.query_bound(cfg.epsilon / 2.0, constants)?, samples)?;

    if let Some(w) = conjugacy_rounds(oracle, cfg.epsilon / 6.0, constants, rng, &mut trace)? {
        return Ok(finish(oracle, trace, Verdict::Reject, Some(w)));
    }
    let outcome = {
        let mut access = CorrectedAccess::new(oracle, samples);
        core.run(&mut access, cfg.epsilon / 2.0, constants, rng, &mut trace)?
    };
    Ok(match outcome {
        CoreOutcome::Accept => finish(oracle, trace, Verdict::Accept, None),
        CoreOutcome::Reject(w) => finish(oracle, trace, Verdict::Reject, w),
    })
}

/// Runs `core` at `cfg.epsilon` with direct access, for inputs already known
/// to be class functions.
pub fn run_core<C: ClassFunctionCore, R: Rng + ?Sized>(
    core: &C,
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    cfg.validate()?;
    let start = oracle.count();
    let mut trace = Trace::new(cfg.trace_limit);
    let outcome = core.run(oracle, cfg.epsilon, &cfg.constants, rng, &mut trace)?;
    let (verdict, witness) = match outcome {
        CoreOutcome::Accept => (Verdict::Accept, None),
        CoreOutcome::Reject(w) => (Verdict::Reject, w),
    };
    let name = format!("{}_core", core.name());
    Ok(TesterReport::new(&name, cfg.epsilon, cfg.seed, verdict, oracle.count() - start, trace, witness))
}
