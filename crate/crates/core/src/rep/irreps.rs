//! Complete systems of unitary irreducible representations.
//!
//! Construction splits the left regular representation `R`. A random
//! Hermitian central element (a combination of class sums) separates the
//! isotypic components; inside each component, a random Hermitian element of
//! the commutant of `R` (the average of `R(x)·H·R(x)*` over `x`) has
//! eigenspaces that are irreducible subspaces. Restricting `R` to one of them
//! in an orthonormal basis gives unitary matrices for that irrep.

use std::cmp::Ordering;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::function::ScalarFunction;
use super::{tau_num, tau_rep, CMatrix};
use crate::error::RepError;
use crate::group::{Element, FiniteGroup, DEFAULT_ORDER_CAP};

/// Groups above this order get sampled (not exhaustive) homomorphism checks
/// during construction. [`IrrepBasis::residuals`] is always exhaustive.
const EXHAUSTIVE_CHECK_LIMIT: usize = 256;

#[derive(Debug, Clone)]
pub struct IrrepConfig {
    pub seed: u64,
    pub max_attempts: usize,
    pub order_cap: usize,
}

impl Default for IrrepConfig {
    fn default() -> Self {
        IrrepConfig {
            seed: 0x1d_5eed,
            max_attempts: 4,
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

/// A unitary irreducible representation, tabulated on every element.
#[derive(Debug, Clone)]
pub struct UnitaryIrrep {
    label: usize,
    dim: usize,
    mats: Vec<CMatrix>,
    character: Vec<Complex64>,
}

impl UnitaryIrrep {
    /// Position of this irrep in the basis; stable across seeds.
    pub fn label(&self) -> usize {
        self.label
    }

    pub fn name(&self) -> String {
        format!("phi{}", self.label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    #[inline]
    pub fn at(&self, x: Element) -> &CMatrix {
        &self.mats[x.index()]
    }

    /// `φ(x⁻¹)`, computed as `φ(x)*`.
    pub fn at_inverse(&self, x: Element) -> CMatrix {
        self.mats[x.index()].adjoint()
    }

    /// `χ(x) = tr φ(x)` for every element.
    pub fn character_values(&self) -> &[Complex64] {
        &self.character
    }
}

#[derive(Debug, Clone)]
pub struct IrrepBasis {
    group: Arc<FiniteGroup>,
    irreps: Vec<UnitaryIrrep>,
}

/// Maximum violations of the representation invariants.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Residuals {
    pub identity: f64,
    pub homomorphism: f64,
    pub unitarity: f64,
    pub irreducibility: f64,
    pub schur: f64,
    pub character_orthonormality: f64,
    pub sum_of_squared_dims: usize,
    pub irrep_count: usize,
    pub class_count: usize,
}

impl IrrepBasis {
    pub fn compute(group: Arc<FiniteGroup>) -> Result<Self, RepError> {
        Self::compute_with(group, &IrrepConfig::default())
    }

    pub fn compute_with(group: Arc<FiniteGroup>, config: &IrrepConfig) -> Result<Self, RepError> {
        if group.order() > config.order_cap {
            return Err(RepError::GroupTooLarge {
                order: group.order(),
                cap: config.order_cap,
            });
        }
        let mut last_reason = String::new();
        for attempt in 0..config.max_attempts.max(1) {
            let seed = config.seed.wrapping_add(attempt as u64);
            match build_irreps(&group, seed) {
                Ok(irreps) => {
                    let basis = IrrepBasis {
                        group: group.clone(),
                        irreps,
                    };
                    match basis.quick_check() {
                        Ok(()) => return Ok(basis),
                        Err(reason) => last_reason = reason,
                    }
                }
                Err(reason) => last_reason = reason,
            }
        }
        Err(RepError::NumericalFailure {
            attempts: config.max_attempts.max(1),
            reason: last_reason,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[UnitaryIrrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn get(&self, label: usize) -> Option<&UnitaryIrrep> {
        self.irreps.get(label)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(UnitaryIrrep::dim).collect()
    }

    /// `χ_φ` as a function (unbounded when `d_φ > 1`).
    pub fn character(&self, label: usize) -> ScalarFunction {
        let phi = &self.irreps[label];
        ScalarFunction::new(self.group.clone(), phi.character.clone()).expect("length matches")
    }

    /// `χ̃_φ = χ_φ / d_φ`, which takes values in the unit disk.
    pub fn normalized_character(&self, label: usize) -> ScalarFunction {
        let phi = &self.irreps[label];
        let d = phi.dim as f64;
        ScalarFunction::new(self.group.clone(), phi.character.iter().map(|c| c / d).collect())
            .expect("length matches")
    }

    /// Labels of the one-dimensional irreps (the nonzero homomorphisms `G → ℂ^×`).
    pub fn linear_characters(&self) -> impl Iterator<Item = usize> + '_ {
        self.irreps.iter().filter(|p| p.dim == 1).map(|p| p.label)
    }

    /// The matrix-entry function `x ↦ φ(x)_{ij}`.
    pub fn matrix_entry(&self, label: usize, i: usize, j: usize) -> ScalarFunction {
        let phi = &self.irreps[label];
        ScalarFunction::new(self.group.clone(), phi.mats.iter().map(|m| m[(i, j)]).collect())
            .expect("length matches")
    }

    /// Cheap acceptance checks run at construction. Exhaustive for small
    /// groups, sampled above [`EXHAUSTIVE_CHECK_LIMIT`].
    fn quick_check(&self) -> Result<(), String> {
        let g = &self.group;
        if self.irreps.len() != g.num_classes() {
            return Err(format!("{} irreps for {} classes", self.irreps.len(), g.num_classes()));
        }
        let total: usize = self.irreps.iter().map(|p| p.dim * p.dim).sum();
        if total != g.order() {
            return Err(format!("sum of squared dims {total} != |G| = {}", g.order()));
        }
        let n = g.order();
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
        for phi in &self.irreps {
            let tol = tau_rep(phi.dim);
            for x in g.elements() {
                let m = phi.at(x);
                let resid = (m * m.adjoint() - CMatrix::identity(phi.dim, phi.dim)).norm();
                if resid > tol {
                    return Err(format!("{} not unitary at {x}: {resid:e}", phi.name()));
                }
            }
            let pairs: Box<dyn Iterator<Item = (Element, Element)>> = if n <= EXHAUSTIVE_CHECK_LIMIT {
                Box::new(g.elements().flat_map(|x| g.elements().map(move |y| (x, y))))
            } else {
                let sampled: Vec<_> = (0..8 * n)
                    .map(|_| (g.uniform_element(&mut rng), g.uniform_element(&mut rng)))
                    .collect();
                Box::new(sampled.into_iter())
            };
            for (x, y) in pairs {
                let resid = (phi.at(g.mul(x, y)) - phi.at(x) * phi.at(y)).norm();
                if resid > tol {
                    return Err(format!("{} not a homomorphism at ({x}, {y}): {resid:e}", phi.name()));
                }
            }
            let norm = phi.character.iter().map(Complex64::norm_sqr).sum::<f64>() / n as f64;
            if (norm - 1.0).abs() > tol {
                return Err(format!("{} reducible: E|χ|² = {norm}", phi.name()));
            }
        }
        for a in &self.irreps {
            for b in &self.irreps[a.label + 1..] {
                let ip: Complex64 = a
                    .character
                    .iter()
                    .zip(&b.character)
                    .map(|(p, q)| p * q.conj())
                    .sum::<Complex64>()
                    / n as f64;
                if ip.norm() > tau_num(n) {
                    return Err(format!("{} and {} not orthogonal", a.name(), b.name()));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive residuals of every invariant, including Schur orthogonality
    /// of all matrix entries. Costs `O(|G|³)`.
    pub fn residuals(&self) -> Residuals {
        let g = &self.group;
        let n = g.order();
        let mut r = Residuals {
            irrep_count: self.irreps.len(),
            class_count: g.num_classes(),
            sum_of_squared_dims: self.irreps.iter().map(|p| p.dim * p.dim).sum(),
            ..Residuals::default()
        };
        for phi in &self.irreps {
            let eye = CMatrix::identity(phi.dim, phi.dim);
            r.identity = r.identity.max((phi.at(g.identity()) - &eye).norm());
            for x in g.elements() {
                let m = phi.at(x);
                r.unitarity = r.unitarity.max((m * m.adjoint() - &eye).norm());
                for y in g.elements() {
                    let resid = (phi.at(g.mul(x, y)) - m * phi.at(y)).norm();
                    r.homomorphism = r.homomorphism.max(resid);
                }
            }
            let norm = phi.character.iter().map(Complex64::norm_sqr).sum::<f64>() / n as f64;
            r.irreducibility = r.irreducibility.max((norm - 1.0).abs());
        }
        // ⟨φ_ij, ψ_kl⟩ = δ_φψ δ_ik δ_jl / d_φ
        let entries: Vec<(usize, usize, usize, Vec<Complex64>)> = self
            .irreps
            .iter()
            .flat_map(|phi| {
                (0..phi.dim).flat_map(move |i| {
                    (0..phi.dim).map(move |j| (phi.label, i, j, phi.mats.iter().map(|m| m[(i, j)]).collect()))
                })
            })
            .collect();
        for (a, (la, ia, ja, va)) in entries.iter().enumerate() {
            for (lb, ib, jb, vb) in &entries[a..] {
                let ip: Complex64 = va.iter().zip(vb).map(|(p, q)| p * q.conj()).sum::<Complex64>() / n as f64;
                let expected = if la == lb && ia == ib && ja == jb {
                    1.0 / self.irreps[*la].dim as f64
                } else {
                    0.0
                };
                r.schur = r.schur.max((ip - expected).norm());
            }
        }
        for a in &self.irreps {
            for b in &self.irreps {
                let ip: Complex64 =
                    a.character.iter().zip(&b.character).map(|(p, q)| p * q.conj()).sum::<Complex64>() / n as f64;
                let expected = if a.label == b.label { 1.0 } else { 0.0 };
                r.character_orthonormality = r.character_orthonormality.max((ip - expected).norm());
            }
        }
        r
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Indices of eigenvalues grouped into clusters of (numerically) equal values.
fn cluster_eigenvalues(values: &[f64]) -> Vec<Vec<usize>> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-7 * scale;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for idx in order {
        if values[idx] - prev > tol || clusters.is_empty() {
            clusters.push(Vec::new());
        }
        clusters.last_mut().unwrap().push(idx);
        prev = values[idx];
    }
    clusters
}

fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

fn build_irreps(group: &FiniteGroup, seed: u64) -> Result<Vec<UnitaryIrrep>, String> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Hermitian central element Z = A + A*, A = Σ_C a_C·(class sum of C).
    // Its (u, v) entry is w(u·v⁻¹) with w(x) = a_{[x]} + conj(a_{[x⁻¹]}).
    let coeffs: Vec<Complex64> = (0..group.num_classes()).map(|_| complex_normal(&mut rng)).collect();
    let w: Vec<Complex64> = group
        .elements()
        .map(|x| coeffs[group.class_of(x)] + coeffs[group.class_of(group.inv(x))].conj())
        .collect();
    let central = CMatrix::from_fn(n, n, |u, v| {
        let (u, v) = (group.element(u).unwrap(), group.element(v).unwrap());
        w[group.mul(u, group.inv(v)).index()]
    });
    let eig = SymmetricEigen::new(central);
    let components = cluster_eigenvalues(eig.eigenvalues.as_slice());
    if components.len() != group.num_classes() {
        return Err(format!(
            "central element split into {} components, expected {}",
            components.len(),
            group.num_classes()
        ));
    }

    // Commutant element M = E_x R(x)·H·R(x)*. Entry (u, v) depends only on
    // u⁻¹v: M_{u,v} = b(u⁻¹v) with b(g) = E_t H_{t, t·g}.
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0);
        for j in i + 1..n {
            let z = complex_normal(&mut rng);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let b: Vec<Complex64> = group
        .elements()
        .map(|g| group.elements().map(|t| h[(t.index(), group.mul(t, g).index())]).sum::<Complex64>() / n as f64)
        .collect();
    let commutant = CMatrix::from_fn(n, n, |u, v| {
        let (u, v) = (group.element(u).unwrap(), group.element(v).unwrap());
        b[group.mul(group.inv(u), v).index()]
    });

    let mut irreps = Vec::with_capacity(components.len());
    for cols in components {
        let m = cols.len();
        let d = (m as f64).sqrt().round() as usize;
        if d * d != m {
            return Err(format!("isotypic component of dimension {m} is not a square"));
        }
        let p = select_columns(&eig.eigenvectors, &cols);
        let q = if d == 1 {
            p
        } else {
            let restricted = p.adjoint() * &commutant * &p;
            let inner = SymmetricEigen::new(restricted);
            let blocks = cluster_eigenvalues(inner.eigenvalues.as_slice());
            if blocks.iter().any(|blk| blk.len() != d) {
                return Err(format!(
                    "commutant eigenspaces {:?} do not all have dimension {d}",
                    blocks.iter().map(Vec::len).collect::<Vec<_>>()
                ));
            }
            &p * select_columns(&inner.eigenvectors, &blocks[0])
        };
        // φ(x)_{ij} = Σ_y conj(Q[x·y, i])·Q[y, j]
        let mats: Vec<CMatrix> = group
            .elements()
            .map(|x| {
                let row = group.row(x);
                CMatrix::from_fn(d, d, |i, j| (0..n).map(|y| q[(row[y], i)].conj() * q[(y, j)]).sum())
            })
            .collect();
        let character = class_constant_character(group, &mats);
        irreps.push(UnitaryIrrep {
            label: 0,
            dim: d,
            mats,
            character,
        });
    }

    let class_order = class_display_order(group);
    irreps.sort_by(|a, b| compare_irreps(a, b, &class_order));
    for (label, phi) in irreps.iter_mut().enumerate() {
        phi.label = label;
    }
    Ok(irreps)
}

/// Traces averaged over each class, so the table is exactly constant on
/// classes, with values within `1e-9` of a Gaussian integer snapped to it.
fn class_constant_character(group: &FiniteGroup, mats: &[CMatrix]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); mats.len()];
    for members in group.classes() {
        let mean = members.iter().map(|&m| mats[m].trace()).sum::<Complex64>() / members.len() as f64;
        let snapped = Complex64::new(mean.re.round(), mean.im.round());
        let value = if (mean - snapped).norm() <= 1e-9 { snapped } else { mean };
        for &m in members {
            out[m] = value;
        }
    }
    out
}

/// Class representatives ordered by (class size, smallest element).
fn class_display_order(group: &FiniteGroup) -> Vec<usize> {
    let mut classes: Vec<&Vec<usize>> = group.classes().iter().collect();
    classes.sort_by_key(|c| (c.len(), c[0]));
    classes.iter().map(|c| c[0]).collect()
}

/// Dimension ascending, then character values on classes compared
/// lexicographically by (re, im), larger first, so the trivial irrep is label 0.
fn compare_irreps(a: &UnitaryIrrep, b: &UnitaryIrrep, reps: &[usize]) -> Ordering {
    const TOL: f64 = 1e-6;
    let cmp_f = |x: f64, y: f64| {
        if (x - y).abs() <= TOL {
            Ordering::Equal
        } else {
            x.total_cmp(&y)
        }
    };
    a.dim.cmp(&b.dim).then_with(|| {
        for &r in reps {
            let (ca, cb) = (a.character[r], b.character[r]);
            let ord = cmp_f(cb.re, ca.re).then_with(|| cmp_f(cb.im, ca.im));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    })
}
