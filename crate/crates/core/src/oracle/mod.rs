//! Exact ground truth computed by enumeration: class-function projections,
//! distances to each tested property, and the identities the testers rely on
//! evaluated without sampling.

mod certificate;
mod class_functions;
mod distances;
mod identities;
mod unitary;

pub use certificate::{FarnessCertificate, Method, Optimizer};
pub use class_functions::{corrected_class_function, mean_class_function, plurality_class_function, ClassSummary};
pub use distances::{
    distance_to_character_rays, distance_to_class_functions, distance_to_homomorphisms, unconstrained_ray_bound,
};
pub use identities::{
    cubic_expectation, cubic_expectation_fourier, cubic_expectation_time_domain, exact_conjugation_rejection_probability,
    naive_conjugation_rejection_probability, naive_weyl_defect, weyl_defect, weyl_lower_bound, CubicExpectation,
};
pub use unitary::{plant_unitary_equivalent, trace_lower_bound, unitary_equivalence_gap, GapSearch};

use crate::error::RepError;

/// Largest order for `O(|G|²)` enumerations.
pub const PAIR_ENUMERATION_CAP: usize = 512;
/// Largest order for `O(|G|³)` enumerations.
pub const TRIPLE_ENUMERATION_CAP: usize = 120;

pub(crate) fn check_cap(order: usize, cap: usize) -> Result<(), RepError> {
    if order > cap {
        Err(RepError::GroupTooLarge { order, cap })
    } else {
        Ok(())
    }
}
