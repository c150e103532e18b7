//! Python bindings for `resolvent_quad`.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use resolvent_quad::cg_variants::{cocg_run, cocr_run, SeedChoice, SeededShiftedRunConfig};
use resolvent_quad::convergence::{SolveOptions, StoppingRule};
use resolvent_quad::harness::generate_unit_circle_shifts;
use resolvent_quad::mmio::read_matrix_market;
use resolvent_quad::oracle::{dense_resolvent_quadform, DenseHermitianMatrix};
use resolvent_quad::{
    minres_run, run_quadratic_forms, Error, QuadFormResult, SparseHermitianMatrix, C64,
};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Sparse Hermitian matrix in CSR form.
#[pyclass(name = "SparseHermitianMatrix", module = "resolvent_quad", frozen)]
struct PyMatrix {
    inner: SparseHermitianMatrix,
}

#[pymethods]
impl PyMatrix {
    /// Builds from a dense list of rows.
    #[staticmethod]
    fn from_dense(rows: Vec<Vec<C64>>) -> PyResult<Self> {
        let inner = SparseHermitianMatrix::from_dense(&rows).map_err(py_err)?;
        Ok(PyMatrix { inner })
    }

    /// Builds from coordinate triplets; both triangles must be given.
    #[staticmethod]
    fn from_triplets(
        n: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        values: Vec<C64>,
    ) -> PyResult<Self> {
        if rows.len() != cols.len() || rows.len() != values.len() {
            return Err(PyValueError::new_err(
                "rows, cols and values must have equal length",
            ));
        }
        let t: Vec<(usize, usize, C64)> = rows
            .into_iter()
            .zip(cols)
            .zip(values)
            .map(|((i, j), x)| (i, j, x))
            .collect();
        let inner = SparseHermitianMatrix::from_triplets(n, &t).map_err(py_err)?;
        Ok(PyMatrix { inner })
    }

    /// Reads a Matrix Market file (`.gz` accepted).
    #[staticmethod]
    fn read(path: std::path::PathBuf) -> PyResult<Self> {
        let inner = read_matrix_market(&path).map_err(py_err)?;
        Ok(PyMatrix { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    fn is_hermitian(&self) -> bool {
        self.inner.is_hermitian()
    }

    fn is_real_symmetric(&self) -> bool {
        self.inner.is_real_symmetric()
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn matvec(&self, x: Vec<C64>) -> PyResult<Vec<C64>> {
        self.inner.matvec(&x).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "SparseHermitianMatrix(n={}, nnz={})",
            self.inner.n(),
            self.inner.nnz()
        )
    }
}

/// Result of a multi-shift run.
#[pyclass(name = "QuadFormResult", module = "resolvent_quad", frozen)]
struct PyResultObj {
    inner: QuadFormResult,
}

#[pymethods]
impl PyResultObj {
    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.name()
    }

    #[getter]
    fn shifts(&self) -> Vec<C64> {
        self.inner.shifts.iter().map(|s| s.z).collect()
    }

    #[getter]
    fn values(&self) -> Vec<C64> {
        self.inner.values()
    }

    #[getter]
    fn statuses(&self) -> Vec<&'static str> {
        self.inner.shifts.iter().map(|s| s.status.name()).collect()
    }

    /// Iteration at which each shift stopped.
    #[getter]
    fn shift_iterations(&self) -> Vec<usize> {
        self.inner.shifts.iter().map(|s| s.iterations).collect()
    }

    /// Vector iterations performed.
    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    fn all_converged(&self) -> bool {
        self.inner.all_converged()
    }

    /// Per-iteration records of shift `index` as dicts; empty unless the run
    /// recorded history.
    fn history<'py>(&self, py: Python<'py>, index: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let s =
            self.inner.shifts.get(index).ok_or_else(|| {
                PyValueError::new_err(format!("shift index {index} out of range"))
            })?;
        s.history
            .iter()
            .map(|h| {
                let d = PyDict::new(py);
                d.set_item("k", h.k)?;
                d.set_item("value", h.value)?;
                d.set_item("mu", h.mu)?;
                d.set_item("nu", h.nu)?;
                d.set_item("rel_err", h.rel_err)?;
                d.set_item("pivot", h.pivot)?;
                d.set_item("residual", h.residual)?;
                Ok(d)
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.shifts.len()
    }

    fn __repr__(&self) -> String {
        let ok = self
            .inner
            .shifts
            .iter()
            .filter(|s| s.status.is_success())
            .count();
        format!(
            "QuadFormResult(method={}, shifts={}, converged={ok}, iterations={})",
            self.inner.method,
            self.inner.shifts.len(),
            self.inner.iterations
        )
    }
}

fn options(
    rtol: f64,
    max_iter: usize,
    lag: usize,
    history: bool,
    reference: Option<Vec<C64>>,
) -> SolveOptions {
    let stopping = match reference {
        Some(reference) => StoppingRule::TrueError { rtol, reference },
        None => StoppingRule::Estimate { rtol },
    };
    SolveOptions {
        stopping,
        max_iter,
        lag,
        history,
    }
}

/// Shifted Lanczos for `v^H (z I - A)^{-1} v` at every shift.
#[pyfunction]
#[pyo3(signature = (a, v, shifts, rtol=1e-10, max_iter=10000, lag=5, history=false, reference=None))]
#[allow(clippy::too_many_arguments)]
fn lanczos(
    py: Python<'_>,
    a: &PyMatrix,
    v: Vec<C64>,
    shifts: Vec<C64>,
    rtol: f64,
    max_iter: usize,
    lag: usize,
    history: bool,
    reference: Option<Vec<C64>>,
) -> PyResult<PyResultObj> {
    let o = options(rtol, max_iter, lag, history, reference);
    let inner = py
        .detach(|| run_quadratic_forms(&a.inner, &v, &shifts, &o))
        .map_err(py_err)?;
    Ok(PyResultObj { inner })
}

/// Shifted MINRES.
#[pyfunction]
#[pyo3(signature = (a, v, shifts, rtol=1e-10, max_iter=10000, lag=5, history=false, reference=None))]
#[allow(clippy::too_many_arguments)]
fn minres(
    py: Python<'_>,
    a: &PyMatrix,
    v: Vec<C64>,
    shifts: Vec<C64>,
    rtol: f64,
    max_iter: usize,
    lag: usize,
    history: bool,
    reference: Option<Vec<C64>>,
) -> PyResult<PyResultObj> {
    let o = options(rtol, max_iter, lag, history, reference);
    let inner = py
        .detach(|| minres_run(&a.inner, &v, &shifts, &o))
        .map_err(py_err)?;
    Ok(PyResultObj { inner })
}

fn seeded(
    seed: Option<usize>,
    rtol: f64,
    max_iter: usize,
    lag: usize,
    history: bool,
    reference: Option<Vec<C64>>,
) -> SeededShiftedRunConfig {
    SeededShiftedRunConfig {
        seed: seed.map_or(SeedChoice::LargestImaginary, SeedChoice::Index),
        options: options(rtol, max_iter, lag, history, reference),
    }
}

/// Shifted COCG; needs a real symmetric matrix. `seed` is a shift index.
#[pyfunction]
#[pyo3(signature = (a, v, shifts, rtol=1e-10, max_iter=10000, lag=5, history=false, reference=None, seed=None))]
#[allow(clippy::too_many_arguments)]
fn cocg(
    py: Python<'_>,
    a: &PyMatrix,
    v: Vec<C64>,
    shifts: Vec<C64>,
    rtol: f64,
    max_iter: usize,
    lag: usize,
    history: bool,
    reference: Option<Vec<C64>>,
    seed: Option<usize>,
) -> PyResult<PyResultObj> {
    let c = seeded(seed, rtol, max_iter, lag, history, reference);
    let inner = py
        .detach(|| cocg_run(&a.inner, &v, &shifts, &c))
        .map_err(py_err)?;
    Ok(PyResultObj { inner })
}

/// Shifted COCR; needs a real symmetric matrix. `seed` is a shift index.
#[pyfunction]
#[pyo3(signature = (a, v, shifts, rtol=1e-10, max_iter=10000, lag=5, history=false, reference=None, seed=None))]
#[allow(clippy::too_many_arguments)]
fn cocr(
    py: Python<'_>,
    a: &PyMatrix,
    v: Vec<C64>,
    shifts: Vec<C64>,
    rtol: f64,
    max_iter: usize,
    lag: usize,
    history: bool,
    reference: Option<Vec<C64>>,
    seed: Option<usize>,
) -> PyResult<PyResultObj> {
    let c = seeded(seed, rtol, max_iter, lag, history, reference);
    let inner = py
        .detach(|| cocr_run(&a.inner, &v, &shifts, &c))
        .map_err(py_err)?;
    Ok(PyResultObj { inner })
}

/// Dense LU reference for `v^H (z I - A)^{-1} v`.
#[pyfunction]
fn dense_quadform(a: &PyMatrix, v: Vec<C64>, z: C64) -> PyResult<C64> {
    let d = DenseHermitianMatrix::from_sparse(&a.inner).map_err(py_err)?;
    dense_resolvent_quadform(&d, &v, z).map_err(py_err)
}

/// `m` points on the unit circle, offset from the real axis.
#[pyfunction]
fn unit_circle_shifts(m: usize) -> PyResult<Vec<C64>> {
    generate_unit_circle_shifts(m).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "resolvent_quad")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyResultObj>()?;
    m.add_function(wrap_pyfunction!(lanczos, m)?)?;
    m.add_function(wrap_pyfunction!(minres, m)?)?;
    m.add_function(wrap_pyfunction!(cocg, m)?)?;
    m.add_function(wrap_pyfunction!(cocr, m)?)?;
    m.add_function(wrap_pyfunction!(dense_quadform, m)?)?;
    m.add_function(wrap_pyfunction!(unit_circle_shifts, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
