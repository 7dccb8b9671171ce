//! Tabulated scalar and matrix functions on a group, and the `.fn` text format.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use super::{tau_num, CMatrix};
use crate::error::RepError;
use crate::group::{Element, FiniteGroup};

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `f: G → ℂ`, one value per element in group index order.
#[derive(Debug, Clone)]
pub struct ScalarFunction {
    group: Arc<FiniteGroup>,
    values: Vec<Complex64>,
    bounded: bool,
}

impl ScalarFunction {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Complex64>) -> Result<Self, RepError> {
        if values.len() != group.order() {
            return Err(RepError::ShapeMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(RepError::ShapeMismatch(format!("non-finite value at element {i}")));
        }
        let slack = 1.0 + tau_num(group.order());
        let bounded = values.iter().all(|v| v.norm() <= slack);
        Ok(ScalarFunction {
            group,
            values,
            bounded,
        })
    }

    /// Like [`ScalarFunction::new`] but insists on values in the unit disk.
    pub fn new_bounded(group: Arc<FiniteGroup>, values: Vec<Complex64>) -> Result<Self, RepError> {
        let f = Self::new(group, values)?;
        if !f.bounded {
            let (index, modulus) = f
                .values
                .iter()
                .map(|v| v.norm())
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            return Err(RepError::Unbounded { index, modulus });
        }
        Ok(f)
    }

    pub fn from_fn(group: Arc<FiniteGroup>, mut f: impl FnMut(Element) -> Complex64) -> Self {
        let values = group.elements().map(&mut f).collect();
        Self::new(group, values).expect("length matches by construction")
    }

    pub fn constant(group: Arc<FiniteGroup>, c: Complex64) -> Self {
        Self::from_fn(group, |_| c)
    }

    /// Builds a class function from one value per conjugacy class.
    pub fn from_class_values(group: Arc<FiniteGroup>, class_values: &[Complex64]) -> Result<Self, RepError> {
        if class_values.len() != group.num_classes() {
            return Err(RepError::ShapeMismatch(format!(
                "{} class values for {} classes",
                class_values.len(),
                group.num_classes()
            )));
        }
        let g = group.clone();
        Ok(Self::from_fn(group, |x| class_values[g.class_of(x)]))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: Element) -> Complex64 {
        self.values[x.index()]
    }

    /// Whether every value lies in the closed unit disk (up to `τ_num`).
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Constant on conjugacy classes, comparing with tolerance `tol`
    /// (`0.0` means exact equality).
    pub fn is_class_function(&self, tol: f64) -> bool {
        self.group.classes().iter().all(|class| {
            let first = self.values[class[0]];
            class.iter().all(|&x| values_equal(self.values[x], first, tol))
        })
    }

    pub fn map(&self, mut op: impl FnMut(Complex64) -> Complex64) -> ScalarFunction {
        let values = self.values.iter().map(|&v| op(v)).collect();
        ScalarFunction::new(self.group.clone(), values).expect("same length")
    }

    pub fn zip_with(
        &self,
        other: &ScalarFunction,
        mut op: impl FnMut(Complex64, Complex64) -> Complex64,
    ) -> Result<ScalarFunction, RepError> {
        if !same_group(&self.group, &other.group) {
            return Err(RepError::GroupMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        ScalarFunction::new(self.group.clone(), values)
    }

    /// `⟨f, g⟩ = E_x f(x)·conj(g(x))`, by full enumeration.
    pub fn inner_product(&self, other: &ScalarFunction) -> Result<Complex64, RepError> {
        if !same_group(&self.group, &other.group) {
            return Err(RepError::GroupMismatch);
        }
        let sum: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(sum / self.values.len() as f64)
    }

    /// `‖f‖₂ = sqrt(E_x |f(x)|²)`.
    pub fn l2_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(Complex64::norm_sqr).sum::<f64>() / self.values.len() as f64
    }

    /// `dist(f, g) = ½‖f − g‖₂`.
    pub fn distance(&self, other: &ScalarFunction) -> Result<f64, RepError> {
        if !same_group(&self.group, &other.group) {
            return Err(RepError::GroupMismatch);
        }
        let sq: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok(0.5 * (sq / self.values.len() as f64).sqrt())
    }

    pub fn to_fn_string(&self) -> String {
        let mut out = format!("scalar {}\n", self.values.len());
        for v in &self.values {
            let _ = writeln!(out, "{} {}", v.re, v.im);
        }
        out
    }
}

/// Equality used by the testers: exact when `tol == 0`, else `|a − b| ≤ tol`.
#[inline]
pub fn values_equal(a: Complex64, b: Complex64, tol: f64) -> bool {
    if tol == 0.0 {
        a == b
    } else {
        (a - b).norm() <= tol
    }
}

/// `f: G → M_d(ℂ)`.
#[derive(Debug, Clone)]
pub struct MatrixFunction {
    group: Arc<FiniteGroup>,
    dim: usize,
    values: Vec<CMatrix>,
    bounded: bool,
}

impl MatrixFunction {
    pub fn new(group: Arc<FiniteGroup>, dim: usize, values: Vec<CMatrix>) -> Result<Self, RepError> {
        if dim == 0 {
            return Err(RepError::ShapeMismatch("matrix dimension must be positive".into()));
        }
        if values.len() != group.order() {
            return Err(RepError::ShapeMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if let Some(i) = values.iter().position(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(RepError::ShapeMismatch(format!("value at element {i} is not {dim}x{dim}")));
        }
        if let Some(i) = values.iter().position(|m| m.iter().any(|v| !v.is_finite())) {
            return Err(RepError::ShapeMismatch(format!("non-finite entry at element {i}")));
        }
        let slack = 1.0 + tau_num(group.order());
        let bounded = values.iter().all(|m| m.norm() <= slack);
        Ok(MatrixFunction {
            group,
            dim,
            values,
            bounded,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: Element) -> &CMatrix {
        &self.values[x.index()]
    }

    /// Whether every value has Frobenius norm at most 1 (up to `τ_num`).
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// `x ↦ U·f(x)·U*`.
    pub fn conjugated_by(&self, u: &CMatrix) -> Result<MatrixFunction, RepError> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(RepError::DimMismatch(u.nrows(), self.dim));
        }
        let uh = u.adjoint();
        let values = self.values.iter().map(|m| u * m * &uh).collect();
        MatrixFunction::new(self.group.clone(), self.dim, values)
    }

    fn check_compatible(&self, other: &MatrixFunction) -> Result<(), RepError> {
        if !same_group(&self.group, &other.group) {
            return Err(RepError::GroupMismatch);
        }
        if self.dim != other.dim {
            return Err(RepError::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// `E_x ‖f(x) − g(x)‖_F²`.
    pub fn mean_sq_frobenius(&self, other: &MatrixFunction) -> Result<f64, RepError> {
        self.check_compatible(other)?;
        let sq: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_squared()).sum();
        Ok(sq / self.values.len() as f64)
    }

    /// `dist(f, g) = ½·sqrt(E_x ‖f(x) − g(x)‖_F²)`.
    pub fn distance(&self, other: &MatrixFunction) -> Result<f64, RepError> {
        Ok(0.5 * self.mean_sq_frobenius(other)?.sqrt())
    }

    /// `⟨f, g⟩ = E_x tr(f(x)·g(x)*)`.
    pub fn inner_product(&self, other: &MatrixFunction) -> Result<Complex64, RepError> {
        self.check_compatible(other)?;
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b.iter()).map(|(p, q)| p * q.conj()).sum::<Complex64>())
            .sum();
        Ok(sum / self.values.len() as f64)
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(CMatrix::norm_squared).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn to_fn_string(&self) -> String {
        let mut out = format!("matrix {} {}\n", self.values.len(), self.dim);
        for m in &self.values {
            for i in 0..self.dim {
                let row: Vec<String> = (0..self.dim)
                    .map(|j| format!("{} {}", m[(i, j)].re, m[(i, j)].im))
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Contents of a `.fn` file before it is attached to a group.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionData {
    Scalar(Vec<Complex64>),
    Matrix { dim: usize, values: Vec<CMatrix> },
}

impl FunctionData {
    pub fn order(&self) -> usize {
        match self {
            FunctionData::Scalar(v) => v.len(),
            FunctionData::Matrix { values, .. } => values.len(),
        }
    }

    /// Parses a `.fn` file. Blank lines and `#` comments are skipped; errors
    /// carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self, RepError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, message: String| RepError::Parse { line, message };
        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_usize = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| err(hline, format!("expected a count, found {tok:?}")))
        };
        let parse_floats = |line_no: usize, line: &str| -> Result<Vec<f64>, RepError> {
            line.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(line_no, format!("invalid number {t:?}"))))
                .collect()
        };
        let mut body = lines.collect::<Vec<_>>().into_iter();
        let last_line = text.lines().count().max(1);
        let data = match fields.as_slice() {
            ["scalar", n] => {
                let n = parse_usize(n)?;
                let mut values = Vec::with_capacity(n);
                for _ in 0..n {
                    let (no, line) = body
                        .next()
                        .ok_or_else(|| err(last_line, format!("expected {n} value lines, found {}", values.len())))?;
                    match parse_floats(no, line)?.as_slice() {
                        [re, im] => values.push(Complex64::new(*re, *im)),
                        other => return Err(err(no, format!("expected `re im`, found {} numbers", other.len()))),
                    }
                }
                FunctionData::Scalar(values)
            }
            ["matrix", n, d] => {
                let n = parse_usize(n)?;
                let d = parse_usize(d)?;
                if d == 0 {
                    return Err(err(hline, "matrix dimension must be positive".into()));
                }
                let mut values = Vec::with_capacity(n);
                for k in 0..n {
                    let mut m = CMatrix::zeros(d, d);
                    for i in 0..d {
                        let (no, line) = body.next().ok_or_else(|| {
                            err(last_line, format!("expected {} matrix rows, found {}", n * d, k * d + i))
                        })?;
                        let nums = parse_floats(no, line)?;
                        if nums.len() != 2 * d {
                            return Err(err(no, format!("expected {} numbers, found {}", 2 * d, nums.len())));
                        }
                        for j in 0..d {
                            m[(i, j)] = Complex64::new(nums[2 * j], nums[2 * j + 1]);
                        }
                    }
                    values.push(m);
                }
                FunctionData::Matrix { dim: d, values }
            }
            _ => {
                return Err(err(
                    hline,
                    format!("expected `scalar <n>` or `matrix <n> <d>`, found {header:?}"),
                ))
            }
        };
        if let Some((no, _)) = body.next() {
            return Err(err(no, "unexpected trailing content".into()));
        }
        Ok(data)
    }

    pub fn into_scalar(self, group: Arc<FiniteGroup>) -> Result<ScalarFunction, RepError> {
        match self {
            FunctionData::Scalar(values) => ScalarFunction::new(group, values),
            FunctionData::Matrix { .. } => Err(RepError::ShapeMismatch("expected a scalar function".into())),
        }
    }

    pub fn into_matrix(self, group: Arc<FiniteGroup>) -> Result<MatrixFunction, RepError> {
        match self {
            FunctionData::Matrix { dim, values } => MatrixFunction::new(group, dim, values),
            FunctionData::Scalar(_) => Err(RepError::ShapeMismatch("expected a matrix function".into())),
        }
    }
}
