//! Quantities the testers estimate, computed exactly. Most have two
//! independent evaluations so that each can check the other.

use num_complex::Complex64;

use super::{check_cap, PAIR_ENUMERATION_CAP, TRIPLE_ENUMERATION_CAP};
use crate::error::RepError;
use crate::rep::{fourier_transform, same_group, IrrepBasis, ScalarFunction};

/// `Pr_{x,y}[f(x) ≠ f(y x y⁻¹)]` with exact equality. Since `y x y⁻¹` is
/// uniform on the class of `x`, this is `(1/|G|)·Σ_C Σ_{a,b ∈ C} [f(a) ≠ f(b)] / |C|`.
pub fn exact_conjugation_rejection_probability(f: &ScalarFunction) -> Result<f64, RepError> {
    let g = f.group();
    check_cap(g.order(), PAIR_ENUMERATION_CAP)?;
    let v = f.values();
    let mut total = 0.0;
    for class in g.classes() {
        let unequal = class
            .iter()
            .flat_map(|&a| class.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| v[a] != v[b])
            .count();
        total += unequal as f64 / class.len() as f64;
    }
    Ok(total / g.order() as f64)
}

/// The same probability by enumerating every pair `(x, y)`.
pub fn naive_conjugation_rejection_probability(f: &ScalarFunction) -> Result<f64, RepError> {
    let g = f.group();
    check_cap(g.order(), PAIR_ENUMERATION_CAP)?;
    let mut rejecting = 0u64;
    for x in g.elements() {
        for y in g.elements() {
            if f.at(x) != f.at(g.conjugate(x, y)) {
                rejecting += 1;
            }
        }
    }
    Ok(rejecting as f64 / (g.order() as f64).powi(2))
}

/// `E_{x,y} f(x) f(y) conj(f(xy))` from both sides of its Fourier expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicExpectation {
    pub time_domain: Complex64,
    pub fourier: Complex64,
}

pub fn cubic_expectation_time_domain(f: &ScalarFunction) -> Result<Complex64, RepError> {
    let g = f.group();
    check_cap(g.order(), PAIR_ENUMERATION_CAP)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for x in g.elements() {
        let fx = f.at(x);
        for y in g.elements() {
            sum += fx * f.at(y) * f.at(g.mul(x, y)).conj();
        }
    }
    Ok(sum / (g.order() as f64).powi(2))
}

/// `Σ_φ d_φ Σ_{i,k} (f̂(φ)²)_{ik}·conj(f̂(φ)_{ik})`.
pub fn cubic_expectation_fourier(f: &ScalarFunction, basis: &IrrepBasis) -> Result<Complex64, RepError> {
    let fh = fourier_transform(f, basis)?;
    Ok(basis
        .irreps()
        .iter()
        .zip(fh.blocks())
        .map(|(phi, block)| {
            let sq = block * block;
            sq.iter().zip(block.iter()).map(|(a, b)| a * b.conj()).sum::<Complex64>() * phi.dim() as f64
        })
        .sum())
}

pub fn cubic_expectation(f: &ScalarFunction, basis: &IrrepBasis) -> Result<CubicExpectation, RepError> {
    Ok(CubicExpectation {
        time_domain: cubic_expectation_time_domain(f)?,
        fourier: cubic_expectation_fourier(f, basis)?,
    })
}

/// `E_{x,y} |f(x)f(y) − f(1)·E_z f(y z x z⁻¹)|²`, using that `z x z⁻¹` is
/// uniform on the class of `x`: the inner mean is `A[C][y] = mean_{c ∈ C} f(y c)`.
pub fn weyl_defect(f: &ScalarFunction) -> Result<f64, RepError> {
    let g = f.group();
    check_cap(g.order(), TRIPLE_ENUMERATION_CAP)?;
    let n = g.order();
    let v = f.values();
    let f1 = f.at(g.identity());
    let class_means: Vec<Vec<Complex64>> = g
        .classes()
        .iter()
        .map(|class| {
            g.elements()
                .map(|y| {
                    let row = g.row(y);
                    class.iter().map(|&c| v[row[c]]).sum::<Complex64>() / class.len() as f64
                })
                .collect()
        })
        .collect();
    let mut sum = 0.0;
    for x in g.elements() {
        let means = &class_means[g.class_of(x)];
        for y in g.elements() {
            sum += (f.at(x) * f.at(y) - f1 * means[y.index()]).norm_sqr();
        }
    }
    Ok(sum / (n * n) as f64)
}

/// The same expectation by a triple loop over `x, y, z`.
pub fn naive_weyl_defect(f: &ScalarFunction) -> Result<f64, RepError> {
    let g = f.group();
    check_cap(g.order(), TRIPLE_ENUMERATION_CAP)?;
    let n = g.order() as f64;
    let f1 = f.at(g.identity());
    let mut sum = 0.0;
    for x in g.elements() {
        for y in g.elements() {
            let inner: Complex64 = g.elements().map(|z| f.at(g.mul(y, g.conjugate(x, z)))).sum::<Complex64>() / n;
            sum += (f.at(x) * f.at(y) - f1 * inner).norm_sqr();
        }
    }
    Ok(sum / (n * n))
}

/// `‖f‖₂² · min_φ ‖f − f(1)·χ̃_φ‖₂²`, which the defect dominates for class
/// functions with `f(1) = 1`.
pub fn weyl_lower_bound(f: &ScalarFunction, basis: &IrrepBasis) -> Result<f64, RepError> {
    if !same_group(f.group(), basis.group()) {
        return Err(RepError::GroupMismatch);
    }
    let f1 = f.at(f.group().identity());
    let mut best = f64::INFINITY;
    for phi in basis.irreps() {
        let chi = basis.normalized_character(phi.label());
        let diff = f.zip_with(&chi, |a, c| a - f1 * c)?;
        best = best.min(diff.norm_sqr());
    }
    Ok(f.norm_sqr() * best)
}
