//! Randomized property testers working through counted query access.
//!
//! - [`test_conjugate_invariance`]: one-sided, `2⌈2/ε²⌉` queries.
//! - [`test_homomorphism`]: one-sided, via the class-function reduction.
//! - [`test_character_proportional`]: via the class-function reduction.
//! - [`test_unitary_equivalence`]: matrix-valued inputs against a known `g`.
//!
//! Every tester draws all randomness from the caller's RNG, so a fixed seed
//! gives an identical [`TesterReport`].

mod access;
pub mod budget;
mod character;
mod config;
mod conjugacy;
mod estimator;
mod homomorphism;
mod reduction;
mod report;
mod unitary;

pub use access::{CorrectedAccess, MatrixOracle, Observation, QueryOracle, ScalarAccess};
pub use character::{test_character_proportional, test_character_proportional_core, CharacterCore, CharacterPlan};
pub use config::{ceil_count, Constants, TesterConfig};
pub use conjugacy::{corrected_query, corrected_query_with, test_conjugate_invariance, Corrected};
pub use estimator::{estimate_mean, multinomial_uniform};
pub use homomorphism::{test_homomorphism, test_homomorphism_core, HomomorphismCore};
pub use reduction::{run_core, with_class_function_reduction, wrapper_corrector_samples, ClassFunctionCore, CoreOutcome};
pub use report::{RoundOutcome, RoundRecord, Stage, TesterReport, Trace, Verdict, Witness};
pub use unitary::{test_unitary_equivalence, UnitaryPlan};
