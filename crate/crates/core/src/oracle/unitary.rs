//! Planted unitary-equivalence instances and a local search for the gap.

use num_complex::Complex64;
use rand::Rng;

use super::certificate::{unitary_artifact, FarnessCertificate, Method};
use crate::error::RepError;
use crate::rep::{sample_haar_unitary, same_group, CMatrix, MatrixFunction};

/// `x ↦ U₀ g(x) U₀*`.
pub fn plant_unitary_equivalent(g: &MatrixFunction, u0: &CMatrix) -> Result<MatrixFunction, RepError> {
    g.conjugated_by(u0)
}

fn check(f: &MatrixFunction, g: &MatrixFunction) -> Result<(), RepError> {
    if !same_group(f.group(), g.group()) {
        return Err(RepError::GroupMismatch);
    }
    if f.dim() != g.dim() {
        return Err(RepError::DimMismatch(f.dim(), g.dim()));
    }
    Ok(())
}

/// `sqrt(E_x |tr f(x) − tr g(x)|² / (4d))`. Traces are invariant under
/// conjugation and `‖A‖_F² ≥ |tr A|²/d`, so this bounds `dist(f, U g U*)`
/// from below for every unitary `U`.
pub fn trace_lower_bound(f: &MatrixFunction, g: &MatrixFunction) -> Result<f64, RepError> {
    check(f, g)?;
    let n = f.values().len() as f64;
    let sum: f64 = f.values().iter().zip(g.values()).map(|(a, b)| (a.trace() - b.trace()).norm_sqr()).sum();
    Ok((sum / n / (4.0 * f.dim() as f64)).sqrt())
}

/// Settings of the local search.
#[derive(Debug, Clone, Copy)]
pub struct GapSearch {
    /// Haar-random starting points, tried after the identity.
    pub restarts: usize,
    pub max_iterations: usize,
}

impl Default for GapSearch {
    fn default() -> Self {
        GapSearch {
            restarts: 8,
            max_iterations: 3000,
        }
    }
}

fn objective(f: &MatrixFunction, g: &MatrixFunction, u: &CMatrix) -> f64 {
    let uh = u.adjoint();
    let sum: f64 = f.values().iter().zip(g.values()).map(|(a, b)| (a - u * b * &uh).norm_squared()).sum();
    sum / f.values().len() as f64
}

/// Steepest-descent direction `A` (anti-Hermitian) for `U ↦ U·exp(ηA)`:
/// with `P = U* f U` and `M = E(g P* − P* g)`, `A = (M* − M)/2`, and the
/// objective decreases at rate `2‖A‖_F²`.
fn descent_direction(f: &MatrixFunction, g: &MatrixFunction, u: &CMatrix) -> CMatrix {
    let uh = u.adjoint();
    let d = u.nrows();
    let mut m = CMatrix::zeros(d, d);
    for (a, b) in f.values().iter().zip(g.values()) {
        let p_adj = (&uh * a * u).adjoint();
        m += b * &p_adj - &p_adj * b;
    }
    m /= Complex64::new(f.values().len() as f64, 0.0);
    (m.adjoint() - m) / Complex64::new(2.0, 0.0)
}

fn retract(m: CMatrix) -> CMatrix {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let rjj = r[(j, j)];
        if rjj.norm() > 0.0 {
            let phase = rjj / rjj.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

fn descend(f: &MatrixFunction, g: &MatrixFunction, start: CMatrix, max_iterations: usize) -> (CMatrix, f64) {
    let d = start.nrows();
    let mut u = start;
    let mut value = objective(f, g, &u);
    let mut step = 1.0;
    for _ in 0..max_iterations {
        if value < 1e-28 {
            break;
        }
        let a = descent_direction(f, g, &u);
        let slope = 2.0 * a.norm_squared();
        if slope < 1e-30 {
            break;
        }
        step *= 2.0;
        let mut improved = false;
        while step > 1e-14 {
            let candidate = retract(&u * (CMatrix::identity(d, d) + &a * Complex64::new(step, 0.0)));
            let next = objective(f, g, &candidate);
            if next <= value - 1e-4 * step * slope {
                u = candidate;
                value = next;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (u, value)
}

/// Searches for `U` minimizing `E_x ‖f(x) − U g(x) U*‖_F²` by Riemannian
/// descent from the identity and from `restarts` Haar-random starts.
pub fn unitary_equivalence_gap<R: Rng + ?Sized>(
    f: &MatrixFunction,
    g: &MatrixFunction,
    search: GapSearch,
    rng: &mut R,
) -> Result<FarnessCertificate, RepError> {
    check(f, g)?;
    let d = f.dim();
    let mut best = descend(f, g, CMatrix::identity(d, d), search.max_iterations);
    for _ in 0..search.restarts {
        if best.1 < 1e-28 {
            break;
        }
        let run = descend(f, g, sample_haar_unitary(d, rng), search.max_iterations);
        if run.1 < best.1 {
            best = run;
        }
    }
    let u = best.0;
    Ok(FarnessCertificate {
        property: "unitary_equivalence".into(),
        distance: f.distance(&g.conjugated_by(&u)?)?,
        method: Method::Heuristic,
        optimizer: unitary_artifact(&u),
        lower_bound: Some(trace_lower_bound(f, g)?),
    })
}
