//! The `spinpq` Python extension module.
//!
//! Exposes the weight type with its spin-norm, hull and deficiency
//! operations, the omega table, and the verification sweeps. All values
//! returned to Python are plain ints, bools, lists, tuples and dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use spinpq_core as core;

fn value_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn shape(p: usize, q: usize) -> PyResult<core::GroupShape> {
    core::GroupShape::new(p, q).map_err(value_err)
}

/// A K-type highest weight `(a_1,...,a_p | b_1,...,b_q)`.
///
/// Construct from a literal like `"2,0,0|7,6,6,6,6"` or from two blocks
/// with `Weight.from_blocks([2,0,0], [7,6,6,6,6])`.
#[pyclass(frozen)]
struct Weight {
    inner: core::KWeight,
}

#[pymethods]
impl Weight {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        let inner: core::KWeight = literal.parse().map_err(value_err)?;
        Ok(Weight { inner })
    }

    #[staticmethod]
    fn from_blocks(head: Vec<i64>, tail: Vec<i64>) -> PyResult<Self> {
        let shape = shape(head.len(), tail.len())?;
        let inner = core::KWeight::from_blocks(shape, &head, &tail).map_err(value_err)?;
        Ok(Weight { inner })
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.shape().p()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.shape().q()
    }

    #[getter]
    fn head(&self) -> Vec<i64> {
        self.inner.head().to_vec()
    }

    #[getter]
    fn tail(&self) -> Vec<i64> {
        self.inner.tail().to_vec()
    }

    fn coordinate_sum(&self) -> i64 {
        self.inner.vector().coordinate_sum()
    }

    /// Squared k-value of the weight itself.
    fn k_value_sq(&self) -> u64 {
        self.inner.vector().k_value_sq()
    }

    /// Exact squared spin norm.
    fn spin_norm_sq(&self) -> u64 {
        core::spin_norm(&self.inner).spin_norm_sq
    }

    /// All omega indices attaining the spin norm, ascending.
    fn spin_argmin(&self) -> Vec<usize> {
        core::spin_norm(&self.inner).argmin_indices
    }

    fn is_u_small(&self) -> bool {
        core::is_u_small(&self.inner)
    }

    /// The lexicographically first witnessing split (f, g, lhs, rhs), or
    /// None when the weight is u-small.
    fn u_large_witness(&self) -> Option<(usize, usize, i64, i64)> {
        core::u_large_witness(&self.inner).map(|w| (w.f, w.g, w.lhs, w.rhs))
    }

    /// Independent hull verdict through the literal pairing criterion.
    fn is_u_small_oracle(&self) -> bool {
        core::is_u_small_oracle(&self.inner)
    }

    fn deficient_indices(&self) -> Vec<usize> {
        core::deficient_indices(&self.inner)
    }

    /// Deficiency data at one omega index, as a dict.
    fn deficiency_profile<'py>(
        &self,
        py: Python<'py>,
        index: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let profile = core::deficiency_profile(&self.inner, index).map_err(value_err)?;
        let delta = core::deficiency_delta_formula(&profile, self.inner.shape());
        let d = PyDict::new(py);
        d.set_item("index", profile.index)?;
        d.set_item("residual", profile.residual.to_string())?;
        d.set_item("head_ge", profile.head_ge)?;
        d.set_item("head_gt", profile.head_gt)?;
        d.set_item("tail_ge", profile.tail_ge)?;
        d.set_item("tail_gt", profile.tail_gt)?;
        d.set_item("k_value_sq", profile.k_value_sq)?;
        d.set_item("k_value_sq_shifted", profile.k_value_sq_shifted)?;
        d.set_item("deficient", profile.deficient)?;
        d.set_item("delta_formula", delta)?;
        Ok(d)
    }

    /// Smallest m with `self + m*beta` u-large.
    fn pencil_first_u_large(&self) -> u64 {
        core::pencil_first_u_large(&self.inner)
    }

    /// Rows (m, u_small, spin_norm_sq) for m = 0..=steps.
    fn pencil_profile(&self, steps: u64) -> PyResult<Vec<(u64, bool, u64)>> {
        Ok(core::pencil_profile(&self.inner, steps)
            .map_err(value_err)?
            .into_iter()
            .map(|r| (r.m, r.u_small, r.spin_norm_sq))
            .collect())
    }

    /// Region tag of a u-large weight ("basic", "large-b", "boundary-r", ...)
    /// or "u-small-or-other".
    fn classify(&self) -> &'static str {
        core::classify_region(&self.inner).as_str()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Weight(\"{}\")", self.inner)
    }

    fn __eq__(&self, other: &Weight) -> bool {
        self.inner == other.inner
    }
}

type OmegaRow = (usize, Vec<i64>, Vec<i64>);

/// The omega table for a shape, as (index, head, tail) triples in
/// lexicographic order.
#[pyfunction]
fn omega(p: usize, q: usize) -> PyResult<Vec<OmegaRow>> {
    let table = core::omega_table(shape(p, q)?);
    Ok(table
        .iter()
        .map(|e| (e.index(), e.head().to_vec(), e.tail().to_vec()))
        .collect())
}

/// The unique tail completing a weakly decreasing head (entries in 0..=q).
#[pyfunction]
fn tail_from_head(q: usize, head: Vec<i64>) -> PyResult<Vec<i64>> {
    let shape = shape(head.len(), q)?;
    core::tail_from_head(shape, &head).map_err(value_err)
}

fn report_dict<'py>(
    py: Python<'py>,
    report: &core::VerificationReport,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("p", report.grid.shape.p())?;
    d.set_item("q", report.grid.shape.q())?;
    d.set_item("cap", report.grid.cap)?;
    d.set_item("verified", report.verified())?;
    d.set_item("weights_scanned", report.weights_scanned)?;
    d.set_item("claims_checked", report.claims_checked.clone())?;
    d.set_item(
        "counterexamples",
        report
            .counterexamples
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>(),
    )?;
    d.set_item("wall_time_seconds", report.wall_time.as_secs_f64())?;
    Ok(d)
}

fn run_sweep<'py>(
    py: Python<'py>,
    p: usize,
    q: usize,
    cap: Option<i64>,
    jobs: Option<usize>,
    runner: fn(&core::SweepGrid, &core::SweepOptions) -> core::Result<core::VerificationReport>,
) -> PyResult<Bound<'py, PyDict>> {
    let shape = shape(p, q)?;
    if cap.is_some_and(|c| c < 1) {
        return Err(PyValueError::new_err("cap must be at least 1"));
    }
    let grid = match cap {
        Some(c) => core::SweepGrid::with_cap(shape, c),
        None => core::SweepGrid::new(shape),
    };
    let opts = core::SweepOptions {
        jobs,
        ..core::SweepOptions::default()
    };
    let report = py.detach(|| runner(&grid, &opts)).map_err(value_err)?;
    report_dict(py, &report)
}

/// Sweep the pencil monotonicity statement over the grid; returns a report
/// dict with `verified`, `weights_scanned` and any counterexamples.
#[pyfunction]
#[pyo3(signature = (p, q, cap=None, jobs=None))]
fn verify_theorem<'py>(
    py: Python<'py>,
    p: usize,
    q: usize,
    cap: Option<i64>,
    jobs: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    run_sweep(py, p, q, cap, jobs, core::verify_theorem)
}

/// Sweep every applicable supporting property suite over the grid.
#[pyfunction]
#[pyo3(signature = (p, q, cap=None, jobs=None))]
fn verify_properties<'py>(
    py: Python<'py>,
    p: usize,
    q: usize,
    cap: Option<i64>,
    jobs: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    run_sweep(py, p, q, cap, jobs, core::verify_all_properties)
}

#[pymodule]
fn spinpq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Weight>()?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(tail_from_head, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(verify_properties, m)?)?;
    Ok(())
}
