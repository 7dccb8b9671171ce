use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::RepError;
use crate::rep::{tau_num, CMatrix, MatrixFunction, ScalarFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    ClosedForm,
    /// A local search: the stated distance is attained by the optimizer, so it
    /// bounds the true distance from above; only `lower_bound` is rigorous.
    Heuristic,
}

/// The function (or unitary) realizing the stated distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimizer {
    ClassFunction {
        values: Vec<Complex64>,
    },
    /// `label` is `None` for the zero function.
    Homomorphism {
        label: Option<usize>,
        values: Vec<Complex64>,
    },
    /// `coefficient · χ_label` (unnormalized character), with the coefficient
    /// kept inside the unit disk after scaling by the dimension.
    CharacterRay {
        label: usize,
        coefficient: Complex64,
        values: Vec<Complex64>,
    },
    /// Row-major `d × d` unitary `U` such that the distance is that of `f`
    /// from `x ↦ U g(x) U*`.
    Unitary {
        dim: usize,
        entries: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarnessCertificate {
    pub property: String,
    pub distance: f64,
    pub method: Method,
    pub optimizer: Optimizer,
    /// A rigorous lower bound when `distance` is not itself exact, or the
    /// unconstrained bound for character rays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
}

impl FarnessCertificate {
    /// Recomputes `dist(f, artifact)` for a scalar certificate and checks it
    /// against the stated distance within `τ_num`.
    pub fn revalidate(&self, f: &ScalarFunction) -> Result<bool, RepError> {
        let values = match &self.optimizer {
            Optimizer::ClassFunction { values }
            | Optimizer::Homomorphism { values, .. }
            | Optimizer::CharacterRay { values, .. } => values,
            Optimizer::Unitary { .. } => {
                return Err(RepError::ShapeMismatch("unitary certificate needs a matrix function".into()))
            }
        };
        let h = ScalarFunction::new(f.group().clone(), values.clone())?;
        let d = f.distance(&h)?;
        Ok((d - self.distance).abs() <= tau_num(f.group().order()))
    }

    /// Recomputes `dist(f, U g U*)` for a unitary certificate.
    pub fn revalidate_matrix(&self, f: &MatrixFunction, g: &MatrixFunction) -> Result<bool, RepError> {
        let Optimizer::Unitary { dim, entries } = &self.optimizer else {
            return Err(RepError::ShapeMismatch("scalar certificate needs a scalar function".into()));
        };
        if entries.len() != dim * dim {
            return Err(RepError::ShapeMismatch(format!("{} entries for a {dim}x{dim} unitary", entries.len())));
        }
        let u = CMatrix::from_row_slice(*dim, *dim, entries);
        let d = f.distance(&g.conjugated_by(&u)?)?;
        Ok((d - self.distance).abs() <= tau_num(f.group().order()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub(crate) fn unitary_artifact(u: &CMatrix) -> Optimizer {
    let dim = u.nrows();
    let entries = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| u[(i, j)]).collect();
    Optimizer::Unitary { dim, entries }
}
