//! Closed-form query counts of accepting runs, computed from the constants
//! alone. On class-function inputs (where no witness can appear) the
//! testers' reported query counts equal these exactly.

use super::character::{CharacterCore, CharacterPlan};
use super::config::{checked_add, checked_mul, Constants};
use super::homomorphism::HomomorphismCore;
use super::reduction::wrapper_corrector_samples;
use super::unitary::UnitaryPlan;
use crate::error::TesterError;

/// How an accepting run of the character tester ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterExit {
    /// The `‖f‖₂²` estimate fell below `ε²/2`.
    NormGate,
    /// Every round passed.
    AllRounds,
}

pub fn conjugacy_queries(epsilon: f64, c: &Constants) -> Result<u64, TesterError> {
    checked_mul(2, c.pair_rounds(epsilon)?)
}

pub fn homomorphism_core_queries(epsilon: f64, c: &Constants) -> Result<u64, TesterError> {
    checked_mul(3, c.pair_rounds(epsilon)?)
}

pub fn homomorphism_queries(epsilon: f64, c: &Constants) -> Result<u64, TesterError> {
    let per_query = wrapper_corrector_samples(&HomomorphismCore, epsilon, c)?;
    let inner = checked_mul(homomorphism_core_queries(epsilon / 2.0, c)?, per_query)?;
    checked_add(conjugacy_queries(epsilon / 6.0, c)?, inner)
}

pub fn character_core_queries(epsilon: f64, exit: CharacterExit, c: &Constants) -> Result<u64, TesterError> {
    let plan = CharacterPlan::new(epsilon, c)?;
    match exit {
        CharacterExit::NormGate => Ok(plan.norm_samples),
        CharacterExit::AllRounds => plan.full_queries(),
    }
}

pub fn character_queries(epsilon: f64, exit: CharacterExit, c: &Constants) -> Result<u64, TesterError> {
    let per_query = wrapper_corrector_samples(&CharacterCore, epsilon, c)?;
    let inner = checked_mul(character_core_queries(epsilon / 2.0, exit, c)?, per_query)?;
    checked_add(conjugacy_queries(epsilon / 6.0, c)?, inner)
}

pub fn unitary_queries_accepting_at(epsilon: f64, dim: usize, t: u64, c: &Constants) -> Result<u64, TesterError> {
    checked_mul(t, UnitaryPlan::new(epsilon, dim, c)?.samples)
}

pub fn unitary_queries_rejecting(epsilon: f64, dim: usize, c: &Constants) -> Result<u64, TesterError> {
    Ok(UnitaryPlan::new(epsilon, dim, c)?.queries_rejecting())
}
