//! Python bindings. Codes may be passed as text or as `GaussCode` objects;
//! structured results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::Serialize;

use knotoid_core as core;
use knotoid_core::warping::Alternation;
use knotoid_core::{Certificate, OpKind, SearchBudget};

#[pyclass(name = "GaussCode", module = "knotoid", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyGaussCode {
    inner: core::GaussCode,
}

#[pymethods]
impl PyGaussCode {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse(text).map(|inner| PyGaussCode { inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GaussCode('{}')", self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn crossing_count(&self) -> usize {
        self.inner.crossing_count()
    }

    fn reverse(&self) -> Self {
        PyGaussCode { inner: self.inner.reverse() }
    }

    fn mirror(&self) -> Self {
        PyGaussCode { inner: self.inner.mirror() }
    }

    fn canonical_key(&self) -> String {
        self.inner.canonical_key()
    }

    fn degree_profile(&self) -> Vec<usize> {
        core::warping::degree_profile(&self.inner)
    }

    fn is_descending(&self) -> bool {
        core::warping::is_descending(&self.inner)
    }
}

fn parse(text: &str) -> PyResult<core::GaussCode> {
    core::parse_code(text).map_err(|e| PyValueError::new_err(format!("{}: {e}", e.kind())))
}

fn code_arg(obj: &Bound<'_, PyAny>) -> PyResult<core::GaussCode> {
    if let Ok(code) = obj.cast::<PyGaussCode>() {
        return Ok(code.get().inner.clone());
    }
    if let Ok(text) = obj.cast::<PyString>() {
        return parse(&text.to_str()?);
    }
    Err(PyValueError::new_err("expected a GaussCode or a code string"))
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn op_arg(op: &str) -> PyResult<OpKind> {
    match op {
        "change" => Ok(OpKind::Change),
        "virtualize" => Ok(OpKind::Virtualize),
        other => Err(PyValueError::new_err(format!("op must be 'change' or 'virtualize', got {other:?}"))),
    }
}

fn budget(n: usize, max_nodes: usize, max_depth: usize, max_chords: Option<usize>) -> PyResult<SearchBudget> {
    let b = SearchBudget { max_nodes, max_depth, max_chords: max_chords.unwrap_or(n + 2) };
    b.validate().map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(b)
}

#[pyfunction]
fn warping_degree(code: &Bound<'_, PyAny>) -> PyResult<usize> {
    Ok(core::warping_degree(&code_arg(code)?))
}

#[pyfunction]
fn warping_degree_at(code: &Bound<'_, PyAny>, base: usize) -> PyResult<usize> {
    core::warping_degree_at(&code_arg(code)?, base).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (code, alternation = "cyclic"))]
fn report<'py>(py: Python<'py>, code: &Bound<'py, PyAny>, alternation: &str) -> PyResult<Bound<'py, PyAny>> {
    let convention = match alternation {
        "cyclic" => Alternation::Cyclic,
        "linear" => Alternation::Linear,
        other => return Err(PyValueError::new_err(format!("unknown alternation {other:?}"))),
    };
    to_py(py, &core::report(&code_arg(code)?, convention))
}

#[pyfunction]
fn descending_certificate<'py>(py: Python<'py>, code: &Bound<'py, PyAny>, base: usize) -> PyResult<Bound<'py, PyAny>> {
    let cert = core::descending_certificate(&code_arg(code)?, base)
        .map_err(|e| PyValueError::new_err(format!("{e:?}")))?;
    to_py(py, &cert)
}

#[pyfunction]
#[pyo3(signature = (code, max_nodes = SearchBudget::DEFAULT_MAX_NODES, max_depth = SearchBudget::DEFAULT_MAX_DEPTH, max_chords = None))]
fn bounded_trivialize<'py>(
    py: Python<'py>,
    code: &Bound<'py, PyAny>,
    max_nodes: usize,
    max_depth: usize,
    max_chords: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let code = code_arg(code)?;
    let budget = budget(code.crossing_count(), max_nodes, max_depth, max_chords)?;
    let verdict = core::bounded_trivialize(&code, &budget).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &verdict)
}

/// Accepts a certificate as a dict or JSON text. Returns the final code and
/// relation, or raises `ValueError` with the failing step.
#[pyfunction]
fn verify_certificate<'py>(py: Python<'py>, certificate: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = match certificate.cast::<PyString>() {
        Ok(s) => s.to_str()?.to_owned(),
        Err(_) => py.import("json")?.call_method1("dumps", (certificate,))?.extract()?,
    };
    let cert: Certificate = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    match core::verify_certificate(&cert) {
        Ok(v) => to_py(py, &serde_json::json!({ "final": v.final_code.to_string(), "relation": v.relation })),
        Err(e) => Err(PyValueError::new_err(serde_json::to_string(&e).unwrap_or_else(|_| format!("{e:?}")))),
    }
}

#[pyfunction]
#[pyo3(signature = (code, op = "change", max_k = None, max_nodes = SearchBudget::DEFAULT_MAX_NODES, max_depth = SearchBudget::DEFAULT_MAX_DEPTH, max_chords = None))]
fn unknot_search<'py>(
    py: Python<'py>,
    code: &Bound<'py, PyAny>,
    op: &str,
    max_k: Option<usize>,
    max_nodes: usize,
    max_depth: usize,
    max_chords: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let code = code_arg(code)?;
    let n = code.crossing_count();
    let budget = budget(n, max_nodes, max_depth, max_chords)?;
    let result = core::unknot_search(&code, op_arg(op)?, max_k.unwrap_or(n), &budget)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &result)
}

#[pyfunction]
#[pyo3(signature = (code, op = "change"))]
fn warping_unknot_certificate<'py>(py: Python<'py>, code: &Bound<'py, PyAny>, op: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::warping_unknot_certificate(&code_arg(code)?, op_arg(op)?))
}

#[pyfunction]
fn all_codes(n: usize) -> PyResult<Vec<String>> {
    let codes = core::all_codes(n).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(codes.iter().map(ToString::to_string).collect())
}

#[pyfunction]
fn random_code(n: usize, seed: u64) -> String {
    core::random_code(n, seed).to_string()
}

#[pymodule]
fn knotoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGaussCode>()?;
    m.add_function(wrap_pyfunction!(warping_degree, m)?)?;
    m.add_function(wrap_pyfunction!(warping_degree_at, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(descending_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_trivialize, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(unknot_search, m)?)?;
    m.add_function(wrap_pyfunction!(warping_unknot_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(all_codes, m)?)?;
    m.add_function(wrap_pyfunction!(random_code, m)?)?;
    Ok(())
}
