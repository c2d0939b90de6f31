use exprk::convergence;
use exprk::order_conditions::{check, Mode, ProbeSet, DEFAULT_DIM};
use exprk::tableau::{baseline_tableaux, exprk5s8};
use exprk::testbed::heat_problem;
use exprk::{ExpRkError, ExpRkTableau};
use nalgebra::DMatrix;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: ExpRkError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn shipped() -> Vec<ExpRkTableau> {
    let mut all = vec![exprk5s8()];
    all.extend(baseline_tableaux());
    all
}

/// A shipped method name, or tableau text in the line format.
fn resolve(method: &str) -> PyResult<ExpRkTableau> {
    if let Some(t) = shipped().into_iter().find(|t| t.name().eq_ignore_ascii_case(method)) {
        return Ok(t);
    }
    if method.contains('\n') {
        return ExpRkTableau::from_text(method).map_err(py_err);
    }
    Err(PyValueError::new_err(format!("unknown method `{method}`")))
}

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a square matrix as a list of rows"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[pyfunction]
fn methods() -> Vec<String> {
    shipped().iter().map(|t| t.name().to_string()).collect()
}

/// phi_j(z) for a real argument.
#[pyfunction]
fn phi(j: u32, z: f64) -> f64 {
    exprk::phi::phi(j, z)
}

/// phi_j of a square matrix given as a list of rows.
#[pyfunction]
fn phi_matrix(j: u32, m: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let p = exprk::phi::phi_matrix(j, &to_matrix(m)?).map_err(py_err)?;
    Ok(p.row_iter().map(|r| r.iter().copied().collect()).collect())
}

#[pyfunction]
fn tableau_text(method: &str) -> PyResult<String> {
    Ok(resolve(method)?.to_text())
}

/// Order-condition report as a dict with `strong_order`, `weakened_order5`
/// and `rows` of `(id, mode, residual, pass)`.
#[pyfunction]
#[pyo3(signature = (method = "expRK5s8", seed = 42, tol = 1e-9, probes = 50))]
fn check_order<'py>(py: Python<'py>, method: &str, seed: u64, tol: f64, probes: usize) -> PyResult<Bound<'py, PyDict>> {
    let t = resolve(method)?;
    let set = ProbeSet::random(DEFAULT_DIM, probes, seed).map_err(py_err)?;
    let report = check(&t, tol, &set).map_err(py_err)?;
    let rows: Vec<(u32, &str, f64, bool)> = report
        .rows
        .iter()
        .map(|r| (r.id, if r.mode == Mode::Strong { "strong" } else { "weakened" }, r.residual, r.pass))
        .collect();
    let d = PyDict::new(py);
    d.set_item("method", report.method.clone())?;
    d.set_item("strong_order", report.strong_order)?;
    d.set_item("weakened_order5", report.weakened_order5)?;
    d.set_item("rows", rows)?;
    Ok(d)
}

/// Error sweep on `heat<N>`: dict with `rows` of `(n_steps, h, error)` and
/// `slope` (None when fewer than two rows clear the floor).
#[pyfunction]
#[pyo3(signature = (method = "expRK5s8", problem = "heat200", steps = vec![8, 16, 32, 64, 128, 256, 512], floor = 1e-11))]
fn converge<'py>(
    py: Python<'py>,
    method: &str,
    problem: &str,
    steps: Vec<usize>,
    floor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let t = resolve(method)?;
    let n = problem
        .strip_prefix("heat")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| PyValueError::new_err(format!("unknown problem `{problem}`")))?;
    let hp = heat_problem(n).map_err(py_err)?;
    let report = py.detach(|| convergence::run(&t, &hp, &steps, floor)).map_err(py_err)?;
    let rows: Vec<(usize, f64, f64)> = report.rows.iter().map(|r| (r.n_steps, r.h, r.error)).collect();
    let d = PyDict::new(py);
    d.set_item("rows", rows)?;
    d.set_item("slope", report.fitted_slope)?;
    d.set_item("csv", report.to_csv())?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "exprk")]
fn exprk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(phi_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(tableau_text, m)?)?;
    m.add_function(wrap_pyfunction!(check_order, m)?)?;
    m.add_function(wrap_pyfunction!(converge, m)?)?;
    Ok(())
}
