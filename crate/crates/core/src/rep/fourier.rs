//! The Fourier transform over a complete set of unitary irreps.
//!
//! `f̂(φ) = E_x f(x)·conj(φ(x))` (entrywise conjugate) and
//! `f(x) = Σ_φ d_φ Σ_{ij} f̂(φ)_{ij} φ_{ij}(x)`.

use num_complex::Complex64;

use super::function::{same_group, ScalarFunction};
use super::irreps::IrrepBasis;
use super::CMatrix;
use crate::error::RepError;

/// One `d_φ × d_φ` block per irrep, indexed by label.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    blocks: Vec<CMatrix>,
}

impl FourierCoefficients {
    pub fn new(blocks: Vec<CMatrix>) -> Self {
        FourierCoefficients { blocks }
    }

    pub fn zeros(basis: &IrrepBasis) -> Self {
        Self::new(basis.irreps().iter().map(|p| CMatrix::zeros(p.dim(), p.dim())).collect())
    }

    pub fn get(&self, label: usize) -> Option<&CMatrix> {
        self.blocks.get(label)
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [CMatrix] {
        &mut self.blocks
    }

    fn check_shape(&self, basis: &IrrepBasis) -> Result<(), RepError> {
        if self.blocks.len() != basis.len() {
            return Err(RepError::ShapeMismatch(format!(
                "{} coefficient blocks for {} irreps",
                self.blocks.len(),
                basis.len()
            )));
        }
        for (block, phi) in self.blocks.iter().zip(basis.irreps()) {
            if block.nrows() != phi.dim() || block.ncols() != phi.dim() {
                return Err(RepError::ShapeMismatch(format!(
                    "block for {} is {}x{}, expected {d}x{d}",
                    phi.name(),
                    block.nrows(),
                    block.ncols(),
                    d = phi.dim()
                )));
            }
        }
        Ok(())
    }

    /// `Σ_φ d_φ Σ_{ij} F(φ)_{ij}·conj(G(φ)_{ij})`.
    pub fn weighted_inner(&self, other: &FourierCoefficients, basis: &IrrepBasis) -> Complex64 {
        basis
            .irreps()
            .iter()
            .zip(self.blocks.iter().zip(&other.blocks))
            .map(|(phi, (a, b))| {
                let s: Complex64 = a.iter().zip(b.iter()).map(|(p, q)| p * q.conj()).sum();
                s * phi.dim() as f64
            })
            .sum()
    }
}

pub fn fourier_transform(f: &ScalarFunction, basis: &IrrepBasis) -> Result<FourierCoefficients, RepError> {
    if !same_group(f.group(), basis.group()) {
        return Err(RepError::GroupMismatch);
    }
    let n = f.values().len() as f64;
    let blocks = basis
        .irreps()
        .iter()
        .map(|phi| {
            let mut acc = CMatrix::zeros(phi.dim(), phi.dim());
            for (m, &v) in phi.matrices().iter().zip(f.values()) {
                acc.zip_apply(m, |a, e| *a += v * e.conj());
            }
            acc / Complex64::new(n, 0.0)
        })
        .collect();
    Ok(FourierCoefficients { blocks })
}

pub fn inverse_fourier(coeffs: &FourierCoefficients, basis: &IrrepBasis) -> Result<ScalarFunction, RepError> {
    coeffs.check_shape(basis)?;
    let group = basis.group().clone();
    let values = group
        .elements()
        .map(|x| {
            basis
                .irreps()
                .iter()
                .zip(&coeffs.blocks)
                .map(|(phi, block)| {
                    let s: Complex64 = block.iter().zip(phi.at(x).iter()).map(|(c, e)| c * e).sum();
                    s * phi.dim() as f64
                })
                .sum()
        })
        .collect();
    ScalarFunction::new(group, values)
}
