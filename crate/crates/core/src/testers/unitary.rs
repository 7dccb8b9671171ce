//! Tester for unitary equivalence of matrix-valued functions.

use rand::Rng;

use super::access::MatrixOracle;
use super::config::{checked_mul, Constants, TesterConfig};
use super::estimator::multinomial_uniform;
use super::report::{RoundOutcome, RoundRecord, Stage, TesterReport, Trace, Verdict};
use crate::error::{RepError, TesterError};
use crate::group::Element;
use crate::rep::{same_group, sample_haar_unitary, MatrixFunction};

/// Iteration and sample counts for a run at `ε` in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitaryPlan {
    /// Haar draws, `⌈(base·d^{3/2}/ε)^{exponent·d²}⌉`.
    pub iterations: u64,
    /// Samples per distance estimate (accuracy `ε²/100`, confidence
    /// `1/(6·iterations)`).
    pub samples: u64,
}

impl UnitaryPlan {
    pub fn new(epsilon: f64, dim: usize, constants: &Constants) -> Result<Self, TesterError> {
        let iterations = constants.net_iterations(epsilon, dim)?;
        let samples = constants.estimator_samples(epsilon * epsilon / 100.0, 1.0 / (6.0 * iterations as f64))?;
        checked_mul(iterations, samples)?;
        Ok(UnitaryPlan { iterations, samples })
    }

    /// Queries of a run that accepts at iteration `t` (1-based).
    pub fn queries_accepting_at(&self, t: u64) -> u64 {
        t * self.samples
    }

    pub fn queries_rejecting(&self) -> u64 {
        self.iterations * self.samples
    }
}

/// Draws Haar unitaries `U` and accepts as soon as the estimate of
/// `¼·E_x‖f(x) − U g(x) U*‖_F²` drops below `ε²/10`.
pub fn test_unitary_equivalence<R: Rng + ?Sized>(
    f: &mut MatrixOracle<'_>,
    g: &MatrixFunction,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    cfg.validate()?;
    let func = f.function();
    if !same_group(func.group(), g.group()) {
        return Err(RepError::GroupMismatch.into());
    }
    if func.dim() != g.dim() {
        return Err(RepError::DimMismatch(func.dim(), g.dim()).into());
    }
    let plan = UnitaryPlan::new(cfg.epsilon, g.dim(), &cfg.constants)?;
    let order = g.group().order();
    let threshold = cfg.epsilon * cfg.epsilon / 10.0;
    let start = f.count();
    let mut trace = Trace::new(cfg.trace_limit);
    let mut counts = Vec::new();
    for t in 1..=plan.iterations {
        let u = sample_haar_unitary(g.dim(), rng);
        let u_adj = u.adjoint();
        multinomial_uniform(rng, plan.samples, order, &mut counts);
        let mut sum = 0.0;
        for &(i, count) in &counts {
            let x = Element::new(i);
            let fx = f.query_repeated(x, count);
            let rotated = &u * g.at(x) * &u_adj;
            sum += count as f64 * (fx - rotated).norm_squared() / 4.0;
        }
        let statistic = sum / plan.samples as f64;
        let accept = statistic < threshold;
        let outcome = match (accept, t == plan.iterations) {
            (true, _) => RoundOutcome::Accept,
            (false, true) => RoundOutcome::Reject,
            (false, false) => RoundOutcome::Continue,
        };
        if outcome != RoundOutcome::Continue || trace.wants(Stage::Net) {
            trace.push(RoundRecord {
                stage: Stage::Net,
                round: t,
                elements: vec![],
                values: vec![],
                statistic: Some(statistic),
                threshold: Some(threshold),
                outcome,
            });
        }
        if accept {
            let queries = f.count() - start;
            return Ok(TesterReport::new("unitary_equivalence", cfg.epsilon, cfg.seed, Verdict::Accept, queries, trace, None));
        }
    }
    let queries = f.count() - start;
    Ok(TesterReport::new("unitary_equivalence", cfg.epsilon, cfg.seed, Verdict::Reject, queries, trace, None))
}
