//! Representation theory of finite groups: unitary irreps, characters, the
//! non-abelian Fourier transform, distances between functions, and Haar
//! sampling on `U(d)`.

mod fourier;
mod function;
mod haar;
mod irreps;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use fourier::{fourier_transform, inverse_fourier, FourierCoefficients};
pub use function::{values_equal, FunctionData, MatrixFunction, ScalarFunction};
pub use haar::{sample_haar_unitary, unitarity_residual};
pub use irreps::{IrrepBasis, IrrepConfig, Residuals, UnitaryIrrep};

pub(crate) use function::same_group;

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for representation invariants of a `d`-dimensional irrep.
pub fn tau_rep(d: usize) -> f64 {
    1e-8 * (d as f64).sqrt()
}

/// Tolerance for transform identities on a group of order `n`.
pub fn tau_num(n: usize) -> f64 {
    1e-8 * (n as f64).sqrt()
}
