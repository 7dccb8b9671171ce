//! Tester for proportionality to an irreducible character.
//!
//! Built on the identity `f(x)·f(y) = f(1)·E_z f(y z x z⁻¹)`, which holds
//! exactly when `f = c·χ̃_φ` for an irrep `φ`.

use num_complex::Complex64;
use rand::Rng;

use super::access::{QueryOracle, ScalarAccess};
use super::config::{checked_add, checked_mul, Constants, TesterConfig};
use super::reduction::{or_reject, run_core, with_class_function_reduction, ClassFunctionCore, CoreOutcome};
use super::report::{RoundOutcome, RoundRecord, Stage, TesterReport, Trace};
use crate::error::TesterError;
use crate::group::Element;

#[derive(Debug, Clone, Copy, Default)]
pub struct CharacterCore;

/// Sample counts of one run of the core at a given `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterPlan {
    /// Samples of the `‖f‖₂²` estimate (accuracy `ε²/100`, confidence `1/100`).
    pub norm_samples: u64,
    /// Rounds, `⌈100/ε⁴⌉`.
    pub rounds: u64,
    /// Samples of each `E_z f(y z x z⁻¹)` estimate (accuracy `ε²/10`,
    /// confidence `1/(100·rounds)`).
    pub round_samples: u64,
}

impl CharacterPlan {
    pub fn new(epsilon: f64, constants: &Constants) -> Result<Self, TesterError> {
        let e2 = epsilon * epsilon;
        let rounds = constants.character_rounds(epsilon)?;
        Ok(CharacterPlan {
            norm_samples: constants.estimator_samples(e2 / 100.0, 1.0 / 100.0)?,
            rounds,
            round_samples: constants.estimator_samples(e2 / 10.0, 1.0 / (100.0 * rounds as f64))?,
        })
    }

    /// Queries of a run that passes the norm gate and every round.
    pub fn full_queries(&self) -> Result<u64, TesterError> {
        let per_round = checked_add(3, self.round_samples)?;
        checked_add(self.norm_samples, checked_mul(self.rounds, per_round)?)
    }
}

impl ClassFunctionCore for CharacterCore {
    fn name(&self) -> &'static str {
        "character_proportional"
    }

    fn query_bound(&self, epsilon: f64, constants: &Constants) -> Result<u64, TesterError> {
        CharacterPlan::new(epsilon, constants)?.full_queries()
    }

    fn run<A: ScalarAccess, R: Rng + ?Sized>(
        &self,
        access: &mut A,
        epsilon: f64,
        constants: &Constants,
        rng: &mut R,
        trace: &mut Trace,
    ) -> Result<CoreOutcome, TesterError> {
        let plan = CharacterPlan::new(epsilon, constants)?;
        let group = access.group().clone();
        let e2 = epsilon * epsilon;

        let everything: Vec<Element> = group.elements().collect();
        let mut norm_sum = 0.0;
        or_reject!(access.query_uniform(&everything, plan.norm_samples, rng, |v, m| norm_sum += m as f64 * v.norm_sqr()));
        let norm = norm_sum / plan.norm_samples as f64;
        let gate = e2 / 2.0;
        trace.push(RoundRecord {
            stage: Stage::Norm,
            round: 1,
            elements: vec![],
            values: vec![],
            statistic: Some(norm),
            threshold: Some(gate),
            outcome: if norm < gate { RoundOutcome::Accept } else { RoundOutcome::Continue },
        });
        if norm < gate {
            return Ok(CoreOutcome::Accept);
        }

        let classes: Vec<Vec<Element>> = (0..group.num_classes()).map(|c| group.class_members(c).collect()).collect();
        let mut points = Vec::new();
        let threshold = e2 * e2 / 100.0;
        for round in 1..=plan.rounds {
            let x = group.uniform_element(rng);
            let y = group.uniform_element(rng);
            let fx = or_reject!(access.query(x, rng)).value;
            let fy = or_reject!(access.query(y, rng)).value;
            let f1 = or_reject!(access.query(group.identity(), rng)).value;
            let class = &classes[group.class_of(x)];
            points.clear();
            points.extend(class.iter().map(|&c| group.mul(y, c)));
            let mut sum = Complex64::new(0.0, 0.0);
            or_reject!(access.query_uniform(&points, plan.round_samples, rng, |v, m| sum += v * m as f64));
            let mean = sum / plan.round_samples as f64;
            let statistic = (fx * fy - f1 * mean).norm_sqr();
            let passed = statistic <= threshold;
            if !passed || round == plan.rounds || trace.wants(Stage::Weyl) {
                trace.push(RoundRecord {
                    stage: Stage::Weyl,
                    round,
                    elements: vec![x, y],
                    values: vec![fx, fy, f1, mean],
                    statistic: Some(statistic),
                    threshold: Some(threshold),
                    outcome: match (passed, round == plan.rounds) {
                        (false, _) => RoundOutcome::Reject,
                        (true, true) => RoundOutcome::Accept,
                        (true, false) => RoundOutcome::Continue,
                    },
                });
            }
            if !passed {
                return Ok(CoreOutcome::Reject(None));
            }
        }
        Ok(CoreOutcome::Accept)
    }
}

/// Tests whether `f` is close to `c·χ̃_φ` for some irrep `φ` and scalar `c`,
/// through the class-function reduction.
pub fn test_character_proportional<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    with_class_function_reduction(&CharacterCore, oracle, cfg, rng)
}

/// The core alone, at `cfg.epsilon`, for class-function inputs.
pub fn test_character_proportional_core<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    run_core(&CharacterCore, oracle, cfg, rng)
}
