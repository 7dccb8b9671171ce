//! Homomorphism tester for functions into the unit disk.

use rand::Rng;

use super::access::{QueryOracle, ScalarAccess};
use super::config::{checked_mul, Constants, TesterConfig};
use super::reduction::{or_reject, run_core, with_class_function_reduction, ClassFunctionCore, CoreOutcome};
use super::report::{RoundOutcome, RoundRecord, Stage, TesterReport, Trace, Witness};
use crate::error::TesterError;
use crate::rep::values_equal;

/// `⌈2/ε²⌉` rounds checking `f(x)·f(y) = f(xy)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HomomorphismCore;

impl ClassFunctionCore for HomomorphismCore {
    fn name(&self) -> &'static str {
        "homomorphism"
    }

    fn query_bound(&self, epsilon: f64, constants: &Constants) -> Result<u64, TesterError> {
        checked_mul(3, constants.pair_rounds(epsilon)?)
    }

    fn run<A: ScalarAccess, R: Rng + ?Sized>(
        &self,
        access: &mut A,
        epsilon: f64,
        constants: &Constants,
        rng: &mut R,
        trace: &mut Trace,
    ) -> Result<CoreOutcome, TesterError> {
        let rounds = constants.pair_rounds(epsilon)?;
        let tol = access.value_tolerance();
        let group = access.group().clone();
        for round in 1..=rounds {
            let x = group.uniform_element(rng);
            let y = group.uniform_element(rng);
            let xy = group.mul(x, y);
            let a = or_reject!(access.query(x, rng));
            let b = or_reject!(access.query(y, rng));
            let c = or_reject!(access.query(xy, rng));
            let passed = values_equal(a.value * b.value, c.value, tol);
            if !passed || round == rounds || trace.wants(Stage::Homomorphism) {
                trace.push(RoundRecord {
                    stage: Stage::Homomorphism,
                    round,
                    elements: vec![x, y, xy],
                    values: vec![a.value, b.value, c.value],
                    statistic: None,
                    threshold: None,
                    outcome: if passed { RoundOutcome::Continue } else { RoundOutcome::Reject },
                });
            }
            if !passed {
                return Ok(CoreOutcome::Reject(Some(Witness::NotHomomorphism {
                    x,
                    y,
                    x_point: a.point,
                    y_point: b.point,
                    product_point: c.point,
                    x_value: a.value,
                    y_value: b.value,
                    product_value: c.value,
                })));
            }
        }
        Ok(CoreOutcome::Accept)
    }
}

/// One-sided homomorphism test: the core behind the class-function reduction.
pub fn test_homomorphism<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    with_class_function_reduction(&HomomorphismCore, oracle, cfg, rng)
}

/// The core alone, at `cfg.epsilon`, for class-function inputs.
pub fn test_homomorphism_core<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    run_core(&HomomorphismCore, oracle, cfg, rng)
}
