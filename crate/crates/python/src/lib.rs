//! Python module `pydlasso`.
//!
//! Matrices cross the boundary as lists of rows and vectors as lists of
//! floats; results come back as plain Python values.

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dlasso::baselines::{fit_lasso_cd, fit_ols, fit_ridge};
use dlasso::model_select::{tune_method, Criterion, Method, TuningGrid};
use dlasso::penalty::{abs_gap_bound, dlasso_grad, dlasso_hess, dlasso_value};
use dlasso::scalar_threshold::{scalar_estimate, ThresholdQuery};
use dlasso::simgen::{ScenarioId, ScenarioSpec};
use dlasso::simulate::{run_simulation, SimMethod, SimulationConfig};
use dlasso::solver::{default_shape, FitConfig, Init};
use dlasso::special_fn::erf_reference;
use dlasso::{Error, PenaltyParams};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Parameter(_) | Error::Domain(_) | Error::Shape { .. } | Error::Data(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Row-major nested lists to a matrix; rows must have equal length.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, String> {
    let n = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    if n == 0 || p == 0 {
        return Err("x must be a non-empty list of non-empty rows".into());
    }
    if let Some(i) = rows.iter().position(|r| r.len() != p) {
        return Err(format!("row {i} has {} entries, expected {p}", rows[i].len()));
    }
    Ok(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
}

fn parse_criterion(name: &str, folds: usize, seed: u64) -> PyResult<Criterion> {
    match name {
        "aic" => Ok(Criterion::Aic),
        "bic" => Ok(Criterion::Bic),
        "gcv" => Ok(Criterion::Gcv),
        "cv" => Ok(Criterion::Cv { k: folds, seed }),
        other => Err(PyValueError::new_err(format!("unknown criterion `{other}`"))),
    }
}

#[pyclass(name = "Dataset", module = "pydlasso", skip_from_py_object)]
pub struct PyDataset {
    inner: dlasso::Dataset,
}

#[pymethods]
impl PyDataset {
    #[new]
    #[pyo3(signature = (x, y, feature_names=None, standardize=true))]
    fn new(x: Vec<Vec<f64>>, y: Vec<f64>, feature_names: Option<Vec<String>>, standardize: bool) -> PyResult<Self> {
        let x = matrix_from_rows(&x).map_err(PyValueError::new_err)?;
        let y = DVector::from_vec(y);
        let names = feature_names.unwrap_or_else(|| (1..=x.ncols()).map(|j| format!("x{j}")).collect());
        let mut d = dlasso::Dataset::new(x, y, names).map_err(py_err)?;
        if standardize {
            d = d.standardize().map_err(py_err)?;
        }
        Ok(PyDataset { inner: d })
    }

    #[staticmethod]
    #[pyo3(signature = (path, response="lpsa", standardize=true))]
    fn from_csv(path: PathBuf, response: &str, standardize: bool) -> PyResult<Self> {
        let inner = dlasso::load_dataset(&path, response, standardize).map_err(py_err)?;
        Ok(PyDataset { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.inner.feature_names().to_vec()
    }

    /// Residual sum of squares of `beta` on this data.
    fn rss(&self, beta: Vec<f64>) -> PyResult<f64> {
        if beta.len() != self.inner.p() {
            return Err(PyValueError::new_err(format!("beta must have {} entries", self.inner.p())));
        }
        Ok(self.inner.rss(&DVector::from_vec(beta)))
    }

    fn __repr__(&self) -> String {
        format!("Dataset(n={}, p={})", self.inner.n(), self.inner.p())
    }
}

#[pyclass(name = "FitResult", module = "pydlasso", get_all)]
pub struct PyFitResult {
    beta: Vec<f64>,
    active_set: Vec<String>,
    iterations: usize,
    converged: bool,
    objective: f64,
    df_count: usize,
    df_trace: f64,
    lam: f64,
    s: f64,
}

#[pymethods]
impl PyFitResult {
    fn __repr__(&self) -> String {
        format!(
            "FitResult(lam={:?}, s={:?}, df_count={}, converged={})",
            self.lam,
            self.s,
            self.df_count,
            if self.converged { "True" } else { "False" }
        )
    }
}

/// Fit the dlasso model. `s` defaults to 1/sqrt(n).
#[pyfunction]
#[pyo3(signature = (data, lam, s=None, tol=1e-8, max_iter=500, init="ridge"))]
fn fit(data: &PyDataset, lam: f64, s: Option<f64>, tol: f64, max_iter: usize, init: &str) -> PyResult<PyFitResult> {
    let d = &data.inner;
    let s = s.unwrap_or_else(|| default_shape(d.n()));
    let params = PenaltyParams::new(s, lam).map_err(py_err)?;
    let init = match init {
        "ridge" => Init::RidgeWarmStart,
        "zeros" => Init::Zeros,
        other => return Err(PyValueError::new_err(format!("unknown init `{other}`"))),
    };
    let mut cfg = FitConfig::new(params).with_init(init);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    let r = dlasso::fit(d, &cfg).map_err(py_err)?;
    let names = d.feature_names();
    Ok(PyFitResult {
        beta: r.beta.iter().copied().collect(),
        active_set: r.active_set.iter().map(|&j| names[j].clone()).collect(),
        iterations: r.iterations,
        converged: r.converged,
        objective: r.objective,
        df_count: r.df_count,
        df_trace: r.df_trace,
        lam,
        s,
    })
}

/// Baseline coefficients: `method` is "ols", "ridge" or "lasso".
#[pyfunction]
#[pyo3(signature = (data, method, lam=0.0))]
fn fit_baseline(data: &PyDataset, method: &str, lam: f64) -> PyResult<Vec<f64>> {
    let d = &data.inner;
    let beta = match method {
        "ols" => fit_ols(d),
        "ridge" => fit_ridge(d, lam),
        "lasso" => fit_lasso_cd(d, lam).map(|f| f.beta),
        other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
    }
    .map_err(py_err)?;
    Ok(beta.iter().copied().collect())
}

/// Grid search; returns (best_lambda, best_s, rows) with rows of
/// (lambda, s, score, df_count, converged).
#[pyfunction]
#[pyo3(signature = (data, criterion="bic", method="dlasso", lambdas=None, s_values=None, folds=10, seed=0))]
#[allow(clippy::type_complexity)]
fn tune(
    data: &PyDataset,
    criterion: &str,
    method: &str,
    lambdas: Option<Vec<f64>>,
    s_values: Option<Vec<f64>>,
    folds: usize,
    seed: u64,
) -> PyResult<(f64, f64, Vec<(f64, f64, f64, usize, bool)>)> {
    let d = &data.inner;
    let method: Method = method.parse().map_err(py_err)?;
    let crit = parse_criterion(criterion, folds, seed)?;
    let grid = TuningGrid::new(
        lambdas.unwrap_or_else(TuningGrid::default_lambdas),
        s_values.unwrap_or_else(|| TuningGrid::default_s_values(d.n())),
    )
    .map_err(py_err)?;
    let template = FitConfig::new(PenaltyParams { s: grid.s_values()[0], lambda: 0.0 });
    let out = tune_method(method, d, &grid, crit, &template).map_err(py_err)?;
    let rows = out
        .table
        .iter()
        .map(|r| (r.params.lambda, r.params.s, r.score, r.df_count, r.converged))
        .collect();
    Ok((out.best.lambda, out.best.s, rows))
}

#[pyfunction]
fn erf(x: f64) -> PyResult<f64> {
    erf_reference(x).map_err(py_err)
}

#[pyfunction]
fn penalty(x: f64, s: f64) -> PyResult<f64> {
    dlasso_value(x, s).map_err(py_err)
}

#[pyfunction]
fn penalty_grad(x: f64, s: f64) -> PyResult<f64> {
    dlasso_grad(x, s).map_err(py_err)
}

#[pyfunction]
fn penalty_hess(x: f64, s: f64) -> PyResult<f64> {
    dlasso_hess(x, s).map_err(py_err)
}

/// (|x| - p(x, s), its upper bound).
#[pyfunction]
fn gap_bound(x: f64, s: f64) -> PyResult<(f64, f64)> {
    let g = abs_gap_bound(x, s).map_err(py_err)?;
    Ok((g.gap, g.bound))
}

/// Minimizer of (y - b)^2 + lam * p(b, s).
#[pyfunction]
fn threshold(y: f64, lam: f64, s: f64) -> PyResult<f64> {
    let params = PenaltyParams::new(s, lam).map_err(py_err)?;
    scalar_estimate(ThresholdQuery { y, params }).map_err(py_err)
}

/// Simulation rows as (replicate, method, pred_mse, param_mse, lambda, s,
/// df_count, converged).
#[pyfunction]
#[pyo3(signature = (scenario, replicates=50, seed=0, methods=None, folds=10))]
#[allow(clippy::type_complexity)]
fn simulate(
    py: Python<'_>,
    scenario: u8,
    replicates: usize,
    seed: u64,
    methods: Option<Vec<String>>,
    folds: usize,
) -> PyResult<Vec<(usize, String, f64, f64, f64, f64, usize, bool)>> {
    let mut spec = ScenarioSpec::new(ScenarioId::from_number(scenario).map_err(py_err)?, seed);
    spec.replicates = replicates;
    let mut cfg = SimulationConfig::new(spec);
    cfg.folds = folds;
    if let Some(m) = methods {
        cfg.methods = m.iter().map(|s| SimMethod::parse(s)).collect::<Result<_, _>>().map_err(py_err)?;
    }
    let rows = py.detach(|| run_simulation(&cfg)).map_err(py_err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.replicate, r.method, r.pred_mse, r.param_mse, r.lambda, r.s, r.df_count, r.converged))
        .collect())
}

#[pymodule]
fn pydlasso(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyFitResult>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(fit_baseline, m)?)?;
    m.add_function(wrap_pyfunction!(tune, m)?)?;
    m.add_function(wrap_pyfunction!(erf, m)?)?;
    m.add_function(wrap_pyfunction!(penalty, m)?)?;
    m.add_function(wrap_pyfunction!(penalty_grad, m)?)?;
    m.add_function(wrap_pyfunction!(penalty_hess, m)?)?;
    m.add_function(wrap_pyfunction!(gap_bound, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("RIDGE_LIKE_S", dlasso::penalty::RIDGE_LIKE_S)?;
    Ok(())
}
