//! Python bindings. Reports, certificates and tables come back as plain
//! dicts decoded from the same JSON the command line prints.

use std::sync::{Arc, OnceLock};

use grouptest_core::harness::{irrep_table, load_group, run_experiment as run_spec, ExperimentSpec};
use grouptest_core::oracle::{self, GapSearch};
use grouptest_core::rep::{fourier_transform, sample_haar_unitary as haar};
use grouptest_core::testers::{self, MatrixOracle, QueryOracle, TesterConfig, TesterReport};
use grouptest_core::{CMatrix, FiniteGroup, IrrepBasis};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_json<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    Ok(from_json(py, &serde_json::to_string(value).map_err(err)?)?.unbind())
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// A finite group with lazily computed irreps.
#[pyclass(frozen)]
struct Group {
    inner: Arc<FiniteGroup>,
    basis: OnceLock<IrrepBasis>,
}

impl Group {
    fn wrap(inner: Arc<FiniteGroup>) -> Self {
        Group { inner, basis: OnceLock::new() }
    }

    fn basis(&self) -> PyResult<&IrrepBasis> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = IrrepBasis::compute(self.inner.clone()).map_err(err)?;
        Ok(self.basis.get_or_init(|| b))
    }

    fn element(&self, index: usize) -> PyResult<grouptest_core::Element> {
        self.inner.element(index).ok_or_else(|| err(format!("no element {index}")))
    }
}

#[pymethods]
impl Group {
    /// `symmetric:4`, `builtin:cyclic:12`, ... or the path of a `.grp` file.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec = if spec.starts_with("builtin:") || std::path::Path::new(spec).exists() {
            spec.to_string()
        } else {
            format!("builtin:{spec}")
        };
        Ok(Group::wrap(load_group(&spec).map_err(err)?))
    }

    /// From a Cayley table, row `x` listing the products `x·y`.
    #[staticmethod]
    fn from_table(table: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Group::wrap(Arc::new(FiniteGroup::from_cayley_table(&table).map_err(err)?)))
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn classes(&self) -> Vec<Vec<usize>> {
        self.inner.classes().to_vec()
    }

    fn mul(&self, x: usize, y: usize) -> PyResult<usize> {
        Ok(self.inner.mul(self.element(x)?, self.element(y)?).index())
    }

    fn inv(&self, x: usize) -> PyResult<usize> {
        Ok(self.inner.inv(self.element(x)?).index())
    }

    fn irreps(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_json(py, &irrep_table(self.basis()?))
    }

    fn __repr__(&self) -> String {
        format!("Group(order={}, classes={})", self.inner.order(), self.inner.num_classes())
    }
}

/// `f: G → ℂ` with values in the closed unit disk.
#[pyclass(frozen)]
struct Function {
    group: Py<Group>,
    inner: grouptest_core::ScalarFunction,
}

#[pymethods]
impl Function {
    #[new]
    fn new(group: Py<Group>, values: Vec<Complex64>) -> PyResult<Self> {
        let inner = grouptest_core::ScalarFunction::new(group.get().inner.clone(), values).map_err(err)?;
        Ok(Function { group, inner })
    }

    /// The normalized character of irrep `label`.
    #[staticmethod]
    fn character(group: Py<Group>, label: usize) -> PyResult<Self> {
        let basis = group.get().basis()?;
        if label >= basis.len() {
            return Err(err(format!("no irrep with label {label}")));
        }
        let inner = basis.normalized_character(label);
        Ok(Function { group, inner })
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn distance(&self, other: &Function) -> PyResult<f64> {
        self.inner.distance(&other.inner).map_err(err)
    }

    fn is_class_function(&self) -> bool {
        self.inner.is_class_function(0.0)
    }

    /// One square block per irrep, as nested lists.
    fn fourier(&self) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
        let coeffs = fourier_transform(&self.inner, self.group.get().basis()?).map_err(err)?;
        Ok(coeffs.blocks().iter().map(rows).collect())
    }

    fn to_fn_string(&self) -> String {
        self.inner.to_fn_string()
    }
}

/// `f: G → ℂ^{d×d}` with every value of Frobenius norm at most 1.
#[pyclass(frozen)]
struct MatrixFunction {
    inner: grouptest_core::MatrixFunction,
}

#[pymethods]
impl MatrixFunction {
    #[new]
    fn new(group: Py<Group>, values: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let d = values.first().map_or(0, Vec::len);
        let mats = values
            .iter()
            .map(|m| {
                if m.len() != d || m.iter().any(|r| r.len() != d) {
                    return Err(err(format!("every value must be {d}×{d}")));
                }
                Ok(CMatrix::from_fn(d, d, |i, j| m[i][j]))
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = grouptest_core::MatrixFunction::new(group.get().inner.clone(), d, mats).map_err(err)?;
        Ok(MatrixFunction { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn values(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.values().iter().map(rows).collect()
    }

    fn distance(&self, other: &MatrixFunction) -> PyResult<f64> {
        self.inner.distance(&other.inner).map_err(err)
    }
}

fn config(epsilon: f64, seed: u64, trace_limit: usize) -> TesterConfig {
    let mut cfg = TesterConfig::new(epsilon, seed);
    cfg.trace_limit = trace_limit;
    cfg
}

fn scalar_test(
    py: Python<'_>,
    f: &Function,
    cfg: TesterConfig,
    run: fn(&mut QueryOracle, &TesterConfig, &mut ChaCha8Rng) -> Result<TesterReport, grouptest_core::TesterError>,
) -> PyResult<Py<PyAny>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut oracle = QueryOracle::with_tolerance(&f.inner, cfg.value_tolerance);
    let report = py.detach(|| run(&mut oracle, &cfg, &mut rng)).map_err(err)?;
    Ok(from_json(py, &report.to_json())?.unbind())
}

#[pyfunction]
#[pyo3(signature = (f, epsilon, seed, trace_limit = 32))]
fn test_conjugate_invariance(py: Python<'_>, f: &Function, epsilon: f64, seed: u64, trace_limit: usize) -> PyResult<Py<PyAny>> {
    scalar_test(py, f, config(epsilon, seed, trace_limit), |o, c, r| testers::test_conjugate_invariance(o, c, r))
}

#[pyfunction]
#[pyo3(signature = (f, epsilon, seed, trace_limit = 32))]
fn test_homomorphism(py: Python<'_>, f: &Function, epsilon: f64, seed: u64, trace_limit: usize) -> PyResult<Py<PyAny>> {
    scalar_test(py, f, config(epsilon, seed, trace_limit), |o, c, r| testers::test_homomorphism(o, c, r))
}

#[pyfunction]
#[pyo3(signature = (f, epsilon, seed, trace_limit = 32))]
fn test_character_proportional(py: Python<'_>, f: &Function, epsilon: f64, seed: u64, trace_limit: usize) -> PyResult<Py<PyAny>> {
    scalar_test(py, f, config(epsilon, seed, trace_limit), |o, c, r| testers::test_character_proportional(o, c, r))
}

#[pyfunction]
#[pyo3(signature = (f, g, epsilon, seed, trace_limit = 32))]
fn test_unitary_equivalence(
    py: Python<'_>,
    f: &MatrixFunction,
    g: &MatrixFunction,
    epsilon: f64,
    seed: u64,
    trace_limit: usize,
) -> PyResult<Py<PyAny>> {
    let cfg = config(epsilon, seed, trace_limit);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut access = MatrixOracle::new(&f.inner);
    let report = py
        .detach(|| testers::test_unitary_equivalence(&mut access, &g.inner, &cfg, &mut rng))
        .map_err(err)?;
    Ok(from_json(py, &report.to_json())?.unbind())
}

/// Exact certificate for `property` in `class-function`, `homomorphism`,
/// `character-ray`.
#[pyfunction]
fn certify(py: Python<'_>, f: &Function, property: &str) -> PyResult<Py<PyAny>> {
    let cert = match property {
        "class-function" => oracle::distance_to_class_functions(&f.inner),
        "homomorphism" => oracle::distance_to_homomorphisms(&f.inner, f.group.get().basis()?).map_err(err)?,
        "character-ray" => oracle::distance_to_character_rays(&f.inner, f.group.get().basis()?).map_err(err)?,
        other => return Err(err(format!("unknown property {other:?}"))),
    };
    to_json(py, &cert)
}

#[pyfunction]
#[pyo3(signature = (f, g, seed = 0))]
fn unitary_equivalence_gap(py: Python<'_>, f: &MatrixFunction, g: &MatrixFunction, seed: u64) -> PyResult<Py<PyAny>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cert = oracle::unitary_equivalence_gap(&f.inner, &g.inner, GapSearch::default(), &mut rng).map_err(err)?;
    to_json(py, &cert)
}

#[pyfunction]
fn conjugation_rejection_probability(f: &Function) -> PyResult<f64> {
    oracle::exact_conjugation_rejection_probability(&f.inner).map_err(err)
}

#[pyfunction]
fn sample_haar_unitary(d: usize, seed: u64) -> PyResult<Vec<Vec<Complex64>>> {
    if d == 0 {
        return Err(err("dimension must be positive"));
    }
    Ok(rows(&haar(d, &mut ChaCha8Rng::seed_from_u64(seed))))
}

/// Runs an experiment described by a dict with the JSON spec fields.
#[pyfunction]
fn run_experiment(py: Python<'_>, spec: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let text: String = py.import("json")?.call_method1("dumps", (spec,))?.extract()?;
    let spec: ExperimentSpec = serde_json::from_str(&text).map_err(err)?;
    let result = py.detach(|| run_spec(&spec)).map_err(err)?;
    Ok(from_json(py, &result.to_json())?.unbind())
}

#[pymodule]
fn grouptest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", grouptest_core::TOOL_VERSION)?;
    m.add_class::<Group>()?;
    m.add_class::<Function>()?;
    m.add_class::<MatrixFunction>()?;
    m.add_function(wrap_pyfunction!(test_conjugate_invariance, m)?)?;
    m.add_function(wrap_pyfunction!(test_homomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(test_character_proportional, m)?)?;
    m.add_function(wrap_pyfunction!(test_unitary_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_equivalence_gap, m)?)?;
    m.add_function(wrap_pyfunction!(conjugation_rejection_probability, m)?)?;
    m.add_function(wrap_pyfunction!(sample_haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
