//! Exact distances from `f` to each property, with the nearest member.

use num_complex::Complex64;

use super::certificate::{FarnessCertificate, Method, Optimizer};
use super::class_functions::mean_class_function;
use crate::error::RepError;
use crate::rep::{same_group, IrrepBasis, ScalarFunction};

fn check_basis(f: &ScalarFunction, basis: &IrrepBasis) -> Result<(), RepError> {
    if same_group(f.group(), basis.group()) {
        Ok(())
    } else {
        Err(RepError::GroupMismatch)
    }
}

/// Distance to the nearest class function, which is the class mean.
pub fn distance_to_class_functions(f: &ScalarFunction) -> FarnessCertificate {
    let nearest = mean_class_function(f);
    FarnessCertificate {
        property: "conjugate_invariance".into(),
        distance: f.distance(&nearest).expect("same group"),
        method: Method::ClosedForm,
        optimizer: Optimizer::ClassFunction {
            values: nearest.values().to_vec(),
        },
        lower_bound: None,
    }
}

/// Minimum over the zero function and every one-dimensional character, which
/// are all the homomorphisms into the unit disk.
pub fn distance_to_homomorphisms(f: &ScalarFunction, basis: &IrrepBasis) -> Result<FarnessCertificate, RepError> {
    check_basis(f, basis)?;
    let zero = ScalarFunction::constant(f.group().clone(), Complex64::new(0.0, 0.0));
    let mut best = (f.distance(&zero)?, None, zero);
    for label in basis.linear_characters() {
        let chi = basis.character(label);
        let d = f.distance(&chi)?;
        if d < best.0 {
            best = (d, Some(label), chi);
        }
    }
    Ok(FarnessCertificate {
        property: "homomorphism".into(),
        distance: best.0,
        method: Method::Exhaustive,
        optimizer: Optimizer::Homomorphism {
            label: best.1,
            values: best.2.values().to_vec(),
        },
        lower_bound: None,
    })
}

/// `½·sqrt(‖f‖₂² − max_φ |⟨f, χ_φ⟩|²)`: the distance to the nearest
/// `c·χ_φ` when `c` ranges over all of `ℂ`.
pub fn unconstrained_ray_bound(f: &ScalarFunction, basis: &IrrepBasis) -> Result<f64, RepError> {
    check_basis(f, basis)?;
    let mut best = 0.0f64;
    for phi in basis.irreps() {
        best = best.max(f.inner_product(&basis.character(phi.label()))?.norm_sqr());
    }
    Ok(0.5 * (f.norm_sqr() - best).max(0.0).sqrt())
}

/// Distance to the nearest `c·χ_φ` taking values in the unit disk, i.e. with
/// `|c| ≤ 1/d_φ`. As `‖χ_φ‖₂ = 1` the best `c` for each `φ` is `⟨f, χ_φ⟩`
/// pulled back radially onto that disk. The unconstrained bound is reported
/// as `lower_bound`.
pub fn distance_to_character_rays(f: &ScalarFunction, basis: &IrrepBasis) -> Result<FarnessCertificate, RepError> {
    check_basis(f, basis)?;
    let mut best: Option<(f64, usize, Complex64, ScalarFunction)> = None;
    for phi in basis.irreps() {
        let chi = basis.character(phi.label());
        let c = f.inner_product(&chi)?;
        let radius = 1.0 / phi.dim() as f64;
        let c = if c.norm() > radius { c * (radius / c.norm()) } else { c };
        let candidate = chi.map(|v| v * c);
        let d = f.distance(&candidate)?;
        if best.as_ref().is_none_or(|b| d < b.0) {
            best = Some((d, phi.label(), c, candidate));
        }
    }
    let (distance, label, coefficient, candidate) = best.expect("at least the trivial irrep");
    Ok(FarnessCertificate {
        property: "character_proportional".into(),
        distance,
        method: Method::ClosedForm,
        optimizer: Optimizer::CharacterRay {
            label,
            coefficient,
            values: candidate.values().to_vec(),
        },
        lower_bound: Some(unconstrained_ray_bound(f, basis)?),
    })
}
