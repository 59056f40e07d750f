//! Python bindings for `monoidlab`.
//!
//! Pipeline functions return plain dicts and lists, mirroring the CLI's JSON output.

use monoidlab::pipeline;
use monoidlab::{Error, MonoidKind, DEFAULT_PRIME};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Structure(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn kind_of(name: &str) -> PyResult<MonoidKind> {
    match name.to_ascii_lowercase().as_str() {
        "op" => Ok(MonoidKind::Op),
        "od" => Ok(MonoidKind::OD),
        "cod" => Ok(MonoidKind::COD),
        _ => Err(PyValueError::new_err(format!("unknown monoid {name:?}; expected op, od or cod"))),
    }
}

fn field(p: u32) -> PyResult<monoidlab::PrimeField> {
    monoidlab::PrimeField::new(p).map_err(to_py)
}

fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(PyModule::import(py, "json")?.call_method1("loads", (text,))?.unbind())
}

/// Arithmetic in `F_p` for an odd prime `p`.
#[pyclass(name = "PrimeField", frozen)]
struct PyPrimeField(monoidlab::PrimeField);

#[pymethods]
impl PyPrimeField {
    #[new]
    #[pyo3(signature = (p = DEFAULT_PRIME))]
    fn new(p: u32) -> PyResult<Self> {
        field(p).map(PyPrimeField)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.modulus()
    }

    fn add(&self, a: i64, b: i64) -> u32 {
        self.0.add(self.0.from_i64(a), self.0.from_i64(b))
    }

    fn mul(&self, a: i64, b: i64) -> u32 {
        self.0.mul(self.0.from_i64(a), self.0.from_i64(b))
    }

    fn inv(&self, a: i64) -> PyResult<u32> {
        let a = self.0.from_i64(a);
        if a == 0 {
            return Err(PyValueError::new_err("0 has no inverse"));
        }
        Ok(self.0.inv(a))
    }

    /// Rank of an integer matrix reduced mod `p`.
    fn rank(&self, rows: Vec<Vec<i64>>) -> PyResult<usize> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(PyValueError::new_err("ragged matrix"));
        }
        Ok(monoidlab::FMatrix::from_rows(self.0, &rows).rank())
    }

    fn __repr__(&self) -> String {
        format!("PrimeField({})", self.0.modulus())
    }
}

/// A monoid with its Cayley table and Green structure.
#[pyclass(name = "Monoid", frozen)]
struct PyMonoid {
    table: monoidlab::MonoidTable,
    green: monoidlab::GreenData,
}

#[pymethods]
impl PyMonoid {
    #[new]
    fn new(kind: &str, n: usize) -> PyResult<Self> {
        let table = monoidlab::MonoidTable::build(kind_of(kind)?, n).map_err(to_py)?;
        let green = monoidlab::GreenData::compute(&table);
        Ok(PyMonoid { table, green })
    }

    #[getter]
    fn kind(&self) -> String {
        self.table.kind().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.table.degree()
    }

    fn __len__(&self) -> usize {
        self.table.len()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.table.identity()
    }

    /// Canonical label of element `i`.
    fn label(&self, i: usize) -> PyResult<String> {
        self.check(i)?;
        Ok(self.table.label(i).to_string())
    }

    /// Image sequence (1-based) of the map underlying element `i`.
    fn images(&self, i: usize) -> PyResult<Vec<usize>> {
        self.check(i)?;
        Ok(self.table.map(i).images().iter().map(|&x| x as usize).collect())
    }

    /// Index of `element_a ∘ element_b`, with `b` applied first.
    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.table.mul(a, b))
    }

    fn is_idempotent(&self, a: usize) -> PyResult<bool> {
        self.check(a)?;
        Ok(self.table.is_idempotent(a))
    }

    fn eggbox(&self, py: Python<'_>, k: usize) -> PyResult<Py<PyAny>> {
        to_object(py, &monoidlab::eggbox(&self.table, &self.green, k).map_err(to_py)?)
    }

    fn verify_green(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &pipeline::verify_green(&self.table, &self.green).map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        format!("Monoid({}_{}, {} elements)", self.table.kind(), self.table.degree(), self.table.len())
    }
}

impl PyMonoid {
    fn check(&self, i: usize) -> PyResult<()> {
        if i >= self.table.len() {
            return Err(PyValueError::new_err(format!("element {i} out of range 0..{}", self.table.len())));
        }
        Ok(())
    }
}

#[pyfunction]
fn sizes(py: Python<'_>, monoid: &str, n: usize) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::sizes(kind_of(monoid)?, n).map_err(to_py)?)
}

#[pyfunction]
fn eggbox(py: Python<'_>, monoid: &str, n: usize, k: usize) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::eggbox_view(kind_of(monoid)?, n, k).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (monoid, n, k, prime = DEFAULT_PRIME))]
fn sandwich(py: Python<'_>, monoid: &str, n: usize, k: usize, prime: u32) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::sandwich(kind_of(monoid)?, n, k, field(prime)?).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (monoid, n, prime = DEFAULT_PRIME))]
fn homdims(py: Python<'_>, monoid: &str, n: usize, prime: u32) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::homdims(kind_of(monoid)?, n, field(prime)?).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (monoid, n, prime = DEFAULT_PRIME))]
fn relations(py: Python<'_>, monoid: &str, n: usize, prime: u32) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::relations(kind_of(monoid)?, n, field(prime)?).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (monoid, n, prime = DEFAULT_PRIME))]
fn quiver(py: Python<'_>, monoid: &str, n: usize, prime: u32) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::quiver(kind_of(monoid)?, n, field(prime)?).map_err(to_py)?)
}

/// The quiver as Graphviz DOT text.
#[pyfunction]
#[pyo3(signature = (monoid, n, prime = DEFAULT_PRIME))]
fn quiver_dot(monoid: &str, n: usize, prime: u32) -> PyResult<String> {
    Ok(pipeline::quiver(kind_of(monoid)?, n, field(prime)?).map_err(to_py)?.to_dot())
}

#[pyfunction]
#[pyo3(signature = (n, prime = DEFAULT_PRIME, extended = false))]
fn cod_decompose(py: Python<'_>, n: usize, prime: u32, extended: bool) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::cod_decompose(n, field(prime)?, extended).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (monoid, n, prime = DEFAULT_PRIME, extended = false))]
fn verify_all(py: Python<'_>, monoid: &str, n: usize, prime: u32, extended: bool) -> PyResult<Py<PyAny>> {
    to_object(py, &pipeline::verify_all(kind_of(monoid)?, n, field(prime)?, extended).map_err(to_py)?)
}

#[pymodule]
fn monoidlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_PRIME", DEFAULT_PRIME)?;
    m.add_class::<PyPrimeField>()?;
    m.add_class::<PyMonoid>()?;
    m.add_function(wrap_pyfunction!(sizes, m)?)?;
    m.add_function(wrap_pyfunction!(eggbox, m)?)?;
    m.add_function(wrap_pyfunction!(sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(homdims, m)?)?;
    m.add_function(wrap_pyfunction!(relations, m)?)?;
    m.add_function(wrap_pyfunction!(quiver, m)?)?;
    m.add_function(wrap_pyfunction!(quiver_dot, m)?)?;
    m.add_function(wrap_pyfunction!(cod_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
