//! Loading groups and functions named on the command line, and JSON views of
//! computed objects.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HarnessError, RepError};
use crate::group::{Builtin, FiniteGroup};
use crate::rep::{FourierCoefficients, FunctionData, IrrepBasis, MatrixFunction, Residuals, ScalarFunction};

pub(crate) fn read_file(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| HarnessError::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    std::fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A `builtin:` spec string or the path of a `.grp` file.
pub fn load_group(spec: &str) -> Result<Arc<FiniteGroup>, HarnessError> {
    if spec.starts_with("builtin:") {
        return Ok(Arc::new(spec.parse::<Builtin>()?.build()?));
    }
    let text = read_file(Path::new(spec))?;
    Ok(Arc::new(FiniteGroup::from_grp_str(&text)?))
}

fn load_data(path: &Path, group: &FiniteGroup) -> Result<FunctionData, HarnessError> {
    let data = FunctionData::parse(&read_file(path)?)?;
    if data.order() != group.order() {
        return Err(RepError::ShapeMismatch(format!(
            "{} has {} values but the group has order {}",
            path.display(),
            data.order(),
            group.order()
        ))
        .into());
    }
    Ok(data)
}

pub fn load_scalar(path: &Path, group: &Arc<FiniteGroup>) -> Result<ScalarFunction, HarnessError> {
    Ok(load_data(path, group)?.into_scalar(group.clone())?)
}

pub fn load_matrix(path: &Path, group: &Arc<FiniteGroup>) -> Result<MatrixFunction, HarnessError> {
    Ok(load_data(path, group)?.into_matrix(group.clone())?)
}

/// Either kind of function, as found in the file.
pub fn load_any(path: &Path, group: &Arc<FiniteGroup>) -> Result<FunctionData, HarnessError> {
    load_data(path, group)
}

#[derive(Debug, Serialize)]
pub struct IrrepSummary {
    pub label: usize,
    pub name: String,
    pub dim: usize,
    /// Character value on each class, classes in index order.
    pub character: Vec<Complex64>,
}

#[derive(Debug, Serialize)]
pub struct IrrepTable {
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub class_representatives: Vec<usize>,
    pub irreps: Vec<IrrepSummary>,
    pub residuals: Residuals,
}

pub fn irrep_table(basis: &IrrepBasis) -> IrrepTable {
    let g = basis.group();
    let reps: Vec<usize> = g.classes().iter().map(|c| c[0]).collect();
    IrrepTable {
        order: g.order(),
        class_sizes: g.classes().iter().map(Vec::len).collect(),
        class_representatives: reps.clone(),
        irreps: basis
            .irreps()
            .iter()
            .map(|phi| IrrepSummary {
                label: phi.label(),
                name: phi.name(),
                dim: phi.dim(),
                character: reps.iter().map(|&r| phi.character_values()[r]).collect(),
            })
            .collect(),
        residuals: basis.residuals(),
    }
}

#[derive(Debug, Serialize)]
pub struct FourierBlock {
    pub label: usize,
    pub dim: usize,
    /// Row-major entries.
    pub entries: Vec<Complex64>,
}

pub fn fourier_blocks(coeffs: &FourierCoefficients, basis: &IrrepBasis) -> Vec<FourierBlock> {
    basis
        .irreps()
        .iter()
        .zip(coeffs.blocks())
        .map(|(phi, block)| FourierBlock {
            label: phi.label(),
            dim: phi.dim(),
            entries: (0..phi.dim())
                .flat_map(|i| (0..phi.dim()).map(move |j| (i, j)))
                .map(|(i, j)| block[(i, j)])
                .collect(),
        })
        .collect()
}
