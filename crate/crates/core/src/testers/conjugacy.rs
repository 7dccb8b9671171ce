//! Conjugate-invariance tester and the self-corrector.

use num_complex::Complex64;
use rand::Rng;

use super::access::{corrected_call, QueryOracle, ScalarAccess};
use super::config::{Constants, TesterConfig};
use super::report::{RoundOutcome, RoundRecord, Stage, TesterReport, Trace, Verdict, Witness};
use crate::error::TesterError;
use crate::group::Element;
use crate::rep::values_equal;

/// `⌈2/ε²⌉` rounds of comparing `f(x)` with `f(y x y⁻¹)` for uniform `x, y`.
/// Returns the witness of the first failing round.
pub(crate) fn conjugacy_rounds<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    epsilon: f64,
    constants: &Constants,
    rng: &mut R,
    trace: &mut Trace,
) -> Result<Option<Witness>, TesterError> {
    let rounds = constants.pair_rounds(epsilon)?;
    let group = oracle.function().group();
    let tol = oracle.value_tolerance();
    for round in 1..=rounds {
        let x = group.uniform_element(rng);
        let y = group.uniform_element(rng);
        let conj = group.conjugate(x, y);
        let fx = oracle.eval(x);
        let fc = oracle.eval(conj);
        let passed = values_equal(fx, fc, tol);
        if !passed || round == rounds || trace.wants(Stage::Conjugacy) {
            trace.push(RoundRecord {
                stage: Stage::Conjugacy,
                round,
                elements: vec![x, y, conj],
                values: vec![fx, fc],
                statistic: None,
                threshold: None,
                outcome: if passed { RoundOutcome::Continue } else { RoundOutcome::Reject },
            });
        }
        if !passed {
            return Ok(Some(Witness::NotConjugationInvariant {
                x,
                conjugator: y,
                value: fx,
                conjugate_value: fc,
            }));
        }
    }
    Ok(None)
}

/// One-sided test of conjugate invariance; class functions are always
/// accepted and use exactly `2⌈2/ε²⌉` queries.
pub fn test_conjugate_invariance<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    cfg: &TesterConfig,
    rng: &mut R,
) -> Result<TesterReport, TesterError> {
    cfg.validate()?;
    let start = oracle.count();
    let mut trace = Trace::new(cfg.trace_limit);
    let witness = conjugacy_rounds(oracle, cfg.epsilon, &cfg.constants, rng, &mut trace)?;
    let verdict = if witness.is_some() { Verdict::Reject } else { Verdict::Accept };
    Ok(TesterReport::new(
        "conjugate_invariance",
        cfg.epsilon,
        cfg.seed,
        verdict,
        oracle.count() - start,
        trace,
        witness,
    ))
}

/// Outcome of one self-corrector call.
#[derive(Debug, Clone, PartialEq)]
pub enum Corrected {
    /// The common value of all sampled conjugates, and the first conjugate.
    Value { value: Complex64, point: Element },
    Witness(Witness),
}

/// Samples `⌈8·ln(2/δ)⌉` conjugates of `x` and returns their common value, or
/// a witness pair if two of them disagree. On a class function this always
/// returns `f(x)`.
pub fn corrected_query<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    x: Element,
    delta: f64,
    rng: &mut R,
) -> Result<Corrected, TesterError> {
    corrected_query_with(oracle, x, delta, &Constants::DEFAULT, rng)
}

pub fn corrected_query_with<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    x: Element,
    delta: f64,
    constants: &Constants,
    rng: &mut R,
) -> Result<Corrected, TesterError> {
    let samples = constants.corrector_samples(delta)?;
    Ok(match corrected_call(oracle, x, samples, rng) {
        Ok(obs) => Corrected::Value {
            value: obs.value,
            point: obs.point,
        },
        Err(w) => Corrected::Witness(w),
    })
}
