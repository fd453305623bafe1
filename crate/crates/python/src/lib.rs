//! Python bindings. Build with `maturin develop` from this directory.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sternpoly::verify::{self, ReversalMode, Verifier};
use sternpoly::{digits, hyperbinary, stern, BiPoly, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Bivariate polynomial with integer coefficients.
#[pyclass(
    name = "BiPoly",
    module = "sternpoly",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyBiPoly(BiPoly);

#[pymethods]
impl PyBiPoly {
    #[new]
    #[pyo3(signature = (text = "0"))]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyBiPoly).map_err(to_py)
    }

    #[staticmethod]
    fn from_terms(terms: Vec<(u32, u32, i64)>) -> PyResult<Self> {
        BiPoly::from_terms(terms).map(PyBiPoly).map_err(to_py)
    }

    #[staticmethod]
    fn x() -> Self {
        PyBiPoly(BiPoly::x())
    }

    #[staticmethod]
    fn y() -> Self {
        PyBiPoly(BiPoly::y())
    }

    /// `(i, j, c)` triples in canonical order.
    fn terms(&self) -> Vec<(u32, u32, i64)> {
        self.0.terms().collect()
    }

    fn coeff(&self, i: u32, j: u32) -> i64 {
        self.0.coeff(i, j)
    }

    fn eval(&self, x: i64, y: i64) -> PyResult<i128> {
        self.0.eval(x, y).map_err(to_py)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_add(&other.0).map(PyBiPoly).map_err(to_py)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_sub(&other.0).map(PyBiPoly).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_mul(&other.0).map(PyBiPoly).map_err(to_py)
    }

    fn __neg__(&self) -> PyResult<Self> {
        self.0.try_neg().map(PyBiPoly).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BiPoly('{}')", self.0)
    }
}

#[pyfunction]
fn stern_poly(n: u64) -> PyResult<PyBiPoly> {
    stern::stern_poly(n).map(PyBiPoly).map_err(to_py)
}

#[pyfunction]
fn stern_poly_matrix(n: u64) -> PyResult<PyBiPoly> {
    stern::stern_poly_matrix(n).map(PyBiPoly).map_err(to_py)
}

#[pyfunction]
fn stern_value(n: u64) -> PyResult<u64> {
    stern::stern_value(n).map_err(to_py)
}

/// Entries of A(bit) as polynomial rows.
#[pyfunction]
fn transition_matrix(bit: u8) -> PyResult<[[PyBiPoly; 2]; 2]> {
    let m = stern::transition_matrix(bit).map_err(to_py)?;
    Ok(m.0.map(|row| row.map(PyBiPoly)))
}

#[pyfunction]
fn reverse(n: u64) -> PyResult<u64> {
    digits::reverse(n).map_err(to_py)
}

#[pyfunction]
fn bits(n: u64) -> PyResult<Vec<u32>> {
    digits::bits(n)
        .map(|w| w.as_slice().iter().map(|&b| u32::from(b)).collect())
        .map_err(to_py)
}

#[pyfunction]
fn runs(n: u64) -> PyResult<Vec<u64>> {
    digits::runs(n)
        .map(|r| r.as_slice().to_vec())
        .map_err(to_py)
}

#[pyfunction]
fn continuant_numerator(ks: Vec<u64>) -> PyResult<u64> {
    let profile = digits::RunProfile::new(ks).map_err(to_py)?;
    digits::continuant_numerator(&profile).map_err(to_py)
}

#[pyfunction]
fn is_power_of_two(t: u64) -> bool {
    digits::is_power_of_two(t)
}

/// Hyperbinary expansions of `m` as digit lists, most significant first.
#[pyfunction]
fn enumerate_expansions(m: u64) -> Vec<Vec<u32>> {
    hyperbinary::enumerate_expansions(m)
        .into_iter()
        .map(|e| e.digits().iter().map(|&d| u32::from(d)).collect())
        .collect()
}

#[pyfunction]
fn expansion_value(digits: Vec<u8>) -> PyResult<u128> {
    let e = hyperbinary::HyperExpansion::new(digits).map_err(to_py)?;
    Ok(hyperbinary::expansion_value(&e))
}

/// `{(i, j): count}` for odd `n`; `method` is "recurrence" or "enumeration".
#[pyfunction]
#[pyo3(signature = (n, method = "recurrence"))]
fn h_counts(n: u64, method: &str) -> PyResult<BTreeMap<(u32, u32), u64>> {
    let counts = match method {
        "recurrence" => hyperbinary::h_counts_recurrence(n),
        "enumeration" => hyperbinary::h_counts_enum(n),
        other => return Err(PyValueError::new_err(format!("unknown method: {other}"))),
    }
    .map_err(to_py)?;
    Ok(counts.iter().collect())
}

#[pyfunction]
fn check_reflection_product(eps: Vec<u8>) -> PyResult<bool> {
    verify::check_reflection_product(&eps).map_err(to_py)
}

/// Runs one range checker and returns the report as a dict with keys
/// `checked`, `failure_count`, `failures` and `elapsed_ms`.
#[pyfunction]
#[pyo3(signature = (which, max = None, min = 1, mode = "polynomial", workers = 1, fail_limit = verify::DEFAULT_FAIL_LIMIT))]
fn run_check<'py>(
    py: Python<'py>,
    which: &str,
    max: Option<u64>,
    min: u64,
    mode: &str,
    workers: usize,
    fail_limit: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = match mode {
        "polynomial" => ReversalMode::Polynomial,
        "integer" => ReversalMode::Integer,
        other => return Err(PyValueError::new_err(format!("unknown mode: {other}"))),
    };
    let v = Verifier::new()
        .with_workers(workers)
        .with_fail_limit(fail_limit);
    let need_max = || max.ok_or_else(|| PyValueError::new_err("max is required"));
    let report = py.detach(|| -> PyResult<_> {
        Ok(match which {
            "lemma" => v.check_lemma_identities(),
            "reversal" => v
                .check_reversal_range(min, need_max()?, mode)
                .map_err(to_py)?,
            "oracle" => v
                .check_oracle_equivalence(min, need_max()?)
                .map_err(to_py)?,
            "continuant" => v.check_continuant_range(min, need_max()?).map_err(to_py)?,
            "powers" => v.check_power_of_two_clause(need_max()?).map_err(to_py)?,
            "matrix" => v.check_matrix_range(min, need_max()?).map_err(to_py)?,
            "reflection" => {
                let len = u32::try_from(need_max()?)
                    .map_err(|_| PyValueError::new_err("word length too large"))?;
                v.check_reflection_words(len).map_err(to_py)?
            }
            other => return Err(PyValueError::new_err(format!("unknown check: {other}"))),
        })
    })?;

    let failures: Vec<(String, String, String)> = report
        .failures
        .iter()
        .map(|f| (f.instance.clone(), f.expected.clone(), f.actual.clone()))
        .collect();
    let out = PyDict::new(py);
    out.set_item("checked", report.checked)?;
    out.set_item("failure_count", report.failure_count)?;
    out.set_item("failures", failures)?;
    out.set_item("elapsed_ms", report.elapsed.as_millis() as u64)?;
    Ok(out)
}

#[pymodule(name = "sternpoly")]
fn sternpoly_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBiPoly>()?;
    m.add_function(wrap_pyfunction!(stern_poly, m)?)?;
    m.add_function(wrap_pyfunction!(stern_poly_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(stern_value, m)?)?;
    m.add_function(wrap_pyfunction!(transition_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(reverse, m)?)?;
    m.add_function(wrap_pyfunction!(bits, m)?)?;
    m.add_function(wrap_pyfunction!(runs, m)?)?;
    m.add_function(wrap_pyfunction!(continuant_numerator, m)?)?;
    m.add_function(wrap_pyfunction!(is_power_of_two, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_expansions, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_value, m)?)?;
    m.add_function(wrap_pyfunction!(h_counts, m)?)?;
    m.add_function(wrap_pyfunction!(check_reflection_product, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    Ok(())
}
