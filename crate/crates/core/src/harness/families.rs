//! Generated test instances.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::group::FiniteGroup;
use crate::rep::{sample_haar_unitary, CMatrix, IrrepBasis, MatrixFunction, ScalarFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `χ̃_φ` for the chosen irrep.
    ExactCharacter,
    /// `χ̃_φ` with a fraction `p` of the non-identity elements resampled.
    PerturbedCharacter,
    /// Uniform values in the disk on each class, with `f(1) = 1`.
    RandomClassFunction,
    /// Uniform values in the disk everywhere.
    RandomFunction,
    /// A one-dimensional character.
    Homomorphism,
    /// A one-dimensional character with a fraction `p` of the non-identity
    /// elements resampled.
    NoisyHomomorphism,
    /// `f = U₀ g U₀*` for Haar `U₀` and random `g`, in dimension `p`.
    PlantedUnitary,
    /// `f = −W g W*` with `g(x)` a scaled near-identity diagonal unitary, so
    /// that traces differ by about `2√d` everywhere; dimension `p`.
    FarUnitary,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::ExactCharacter,
        Family::PerturbedCharacter,
        Family::RandomClassFunction,
        Family::RandomFunction,
        Family::Homomorphism,
        Family::NoisyHomomorphism,
        Family::PlantedUnitary,
        Family::FarUnitary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ExactCharacter => "exact-character",
            Family::PerturbedCharacter => "perturbed-character",
            Family::RandomClassFunction => "random-class-function",
            Family::RandomFunction => "random-function",
            Family::Homomorphism => "homomorphism",
            Family::NoisyHomomorphism => "noisy-homomorphism",
            Family::PlantedUnitary => "planted-unitary",
            Family::FarUnitary => "far-unitary",
        }
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, Family::PlantedUnitary | Family::FarUnitary)
    }

    /// Parameter used when the experiment gives none.
    pub fn default_param(self) -> f64 {
        match self {
            Family::PerturbedCharacter | Family::NoisyHomomorphism => 0.1,
            Family::PlantedUnitary | Family::FarUnitary => 2.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HarnessError::InvalidSpec(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Scalar(ScalarFunction),
    /// The tested `f` and the reference `g`.
    Matrix(MatrixFunction, MatrixFunction),
}

/// Uniform point of the closed unit disk.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r: f64 = rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

fn resample_fraction<R: Rng + ?Sized>(f: &ScalarFunction, fraction: f64, rng: &mut R) -> Result<ScalarFunction, HarnessError> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(HarnessError::InvalidSpec(format!("perturbation fraction {fraction} is outside [0, 1]")));
    }
    let n = f.group().order();
    let count = ((n - 1) as f64 * fraction).round() as usize;
    let mut values = f.values().to_vec();
    for i in sample(rng, n - 1, count) {
        values[i + 1] = disk_point(rng);
    }
    Ok(ScalarFunction::new(f.group().clone(), values)?)
}

fn pick_linear(basis: &IrrepBasis, label: Option<usize>) -> Result<usize, HarnessError> {
    match label {
        Some(l) if basis.get(l).is_some_and(|p| p.dim() == 1) => Ok(l),
        Some(l) => Err(HarnessError::InvalidSpec(format!("irrep {l} is not one-dimensional"))),
        None => Ok(basis.linear_characters().last().expect("the trivial character")),
    }
}

fn pick_irrep(basis: &IrrepBasis, label: Option<usize>) -> Result<usize, HarnessError> {
    match label {
        Some(l) if l < basis.len() => Ok(l),
        Some(l) => Err(HarnessError::InvalidSpec(format!("no irrep with label {l}"))),
        None => Ok(basis.len() - 1),
    }
}

fn matrix_dim(param: f64) -> Result<usize, HarnessError> {
    if param >= 1.0 && param.fract() == 0.0 && param <= 16.0 {
        Ok(param as usize)
    } else {
        Err(HarnessError::InvalidSpec(format!("matrix dimension must be an integer in 1..=16, got {param}")))
    }
}

fn random_bounded_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let m = CMatrix::from_fn(d, d, |_, _| disk_point(rng));
    let scale = rng.random_range(0.5..1.0) / m.norm().max(f64::MIN_POSITIVE);
    m * Complex64::new(scale, 0.0)
}

/// Builds an instance of `family` with parameter `param`. `label` selects
/// the irrep for character families (default: the last one, of largest
/// dimension) and the character for homomorphism families (default: the
/// last one-dimensional irrep).
pub fn generate<R: Rng + ?Sized>(
    family: Family,
    param: f64,
    label: Option<usize>,
    group: &Arc<FiniteGroup>,
    basis: Option<&IrrepBasis>,
    rng: &mut R,
) -> Result<Instance, HarnessError> {
    let need_basis = || basis.ok_or_else(|| HarnessError::InvalidSpec(format!("{family} needs the irreps of the group")));
    Ok(match family {
        Family::ExactCharacter => {
            let b = need_basis()?;
            Instance::Scalar(b.normalized_character(pick_irrep(b, label)?))
        }
        Family::PerturbedCharacter => {
            let b = need_basis()?;
            Instance::Scalar(resample_fraction(&b.normalized_character(pick_irrep(b, label)?), param, rng)?)
        }
        Family::RandomClassFunction => {
            let mut class_values: Vec<Complex64> = (0..group.num_classes()).map(|_| disk_point(rng)).collect();
            class_values[group.class_of(group.identity())] = Complex64::new(1.0, 0.0);
            Instance::Scalar(ScalarFunction::from_class_values(group.clone(), &class_values)?)
        }
        Family::RandomFunction => Instance::Scalar(ScalarFunction::from_fn(group.clone(), |_| disk_point(rng))),
        Family::Homomorphism => {
            let b = need_basis()?;
            Instance::Scalar(b.character(pick_linear(b, label)?))
        }
        Family::NoisyHomomorphism => {
            let b = need_basis()?;
            Instance::Scalar(resample_fraction(&b.character(pick_linear(b, label)?), param, rng)?)
        }
        Family::PlantedUnitary => {
            let d = matrix_dim(param)?;
            let values = (0..group.order()).map(|_| random_bounded_matrix(d, rng)).collect();
            let g = MatrixFunction::new(group.clone(), d, values)?;
            let f = g.conjugated_by(&sample_haar_unitary(d, rng))?;
            Instance::Matrix(f, g)
        }
        Family::FarUnitary => {
            let d = matrix_dim(param)?;
            let scale = 1.0 / (d as f64).sqrt();
            let values = (0..group.order())
                .map(|_| {
                    let diag: Vec<Complex64> =
                        (0..d).map(|_| Complex64::from_polar(scale, rng.random_range(-0.1..0.1))).collect();
                    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
                })
                .collect();
            let g = MatrixFunction::new(group.clone(), d, values)?;
            let f = g.conjugated_by(&sample_haar_unitary(d, rng))?;
            let f = MatrixFunction::new(group.clone(), d, f.values().iter().map(|m| -m).collect())?;
            Instance::Matrix(f, g)
        }
    })
}
