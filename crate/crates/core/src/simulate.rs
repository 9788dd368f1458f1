//! Replicated simulation study: generate a scenario, tune each method by
//! k-fold CV on the training rows, refit, and score on the test rows.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model_select::{tune_method, Criterion, Method, TuningGrid};
use crate::penalty::PenaltyParams;
use crate::simgen::{generate, metrics, scenario_truth, ScenarioSpec};
use crate::solver::FitConfig;

/// Shape used by the fixed-shape dlasso variant.
pub const FIXED_SHAPE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimMethod {
    /// dlasso with both lambda and s tuned.
    Dlasso,
    /// dlasso with s fixed and lambda tuned.
    DlassoFixedS(f64),
    Lasso,
    Ridge,
    Ols,
}

impl SimMethod {
    pub fn name(&self) -> String {
        match self {
            SimMethod::Dlasso => "dlasso".into(),
            SimMethod::DlassoFixedS(s) if *s == FIXED_SHAPE => "dlasso-s".into(),
            SimMethod::DlassoFixedS(s) => format!("dlasso-s{s}"),
            SimMethod::Lasso => "lasso".into(),
            SimMethod::Ridge => "ridge".into(),
            SimMethod::Ols => "ols".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dlasso" => Ok(SimMethod::Dlasso),
            "dlasso-s" => Ok(SimMethod::DlassoFixedS(FIXED_SHAPE)),
            "lasso" => Ok(SimMethod::Lasso),
            "ridge" => Ok(SimMethod::Ridge),
            "ols" => Ok(SimMethod::Ols),
            other => other
                .strip_prefix("dlasso-s")
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| *v > 0.0 && v.is_finite())
                .map(SimMethod::DlassoFixedS)
                .ok_or_else(|| Error::Parameter(format!("unknown simulation method `{other}`"))),
        }
    }

    pub fn all() -> Vec<SimMethod> {
        vec![
            SimMethod::Dlasso,
            SimMethod::DlassoFixedS(FIXED_SHAPE),
            SimMethod::Lasso,
            SimMethod::Ridge,
            SimMethod::Ols,
        ]
    }

    fn method(&self) -> Method {
        match self {
            SimMethod::Dlasso | SimMethod::DlassoFixedS(_) => Method::Dlasso,
            SimMethod::Lasso => Method::Lasso,
            SimMethod::Ridge => Method::Ridge,
            SimMethod::Ols => Method::Ols,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub spec: ScenarioSpec,
    pub methods: Vec<SimMethod>,
    pub folds: usize,
    pub lambdas: Vec<f64>,
    /// Shape grid for the fully tuned dlasso; `None` uses the default grid
    /// for the training size.
    pub s_values: Option<Vec<f64>>,
}

impl SimulationConfig {
    pub fn new(spec: ScenarioSpec) -> Self {
        SimulationConfig {
            spec,
            methods: SimMethod::all(),
            folds: 10,
            lambdas: TuningGrid::default_lambdas(),
            s_values: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub replicate: usize,
    pub method: String,
    pub pred_mse: f64,
    pub param_mse: f64,
    pub lambda: f64,
    /// NaN for methods without a shape parameter.
    pub s: f64,
    pub df_count: usize,
    pub converged: bool,
}

fn run_method(
    method: SimMethod,
    cfg: &SimulationConfig,
    train: &crate::Dataset,
    cv_seed: u64,
) -> Result<(PenaltyParams, DVector<f64>, usize, bool)> {
    let n = train.n();
    let s_values = match method {
        SimMethod::Dlasso => cfg
            .s_values
            .clone()
            .unwrap_or_else(|| TuningGrid::default_s_values(n)),
        SimMethod::DlassoFixedS(s) => vec![s],
        _ => vec![1.0],
    };
    let grid = TuningGrid::new(cfg.lambdas.clone(), s_values)?;
    let template = FitConfig::new(PenaltyParams { s: grid.s_values()[0], lambda: 0.0 });
    let crit = Criterion::Cv { k: cfg.folds, seed: cv_seed };
    let outcome = tune_method(method.method(), train, &grid, crit, &template)?;
    let model = method.method().fit(train, outcome.best, &template)?;
    Ok((outcome.best, model.beta, model.df_count, model.converged))
}

/// One row per (replicate, method), replicates in order.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<Vec<SimRow>> {
    cfg.spec.validate()?;
    if cfg.methods.is_empty() {
        return Err(Error::Parameter("no simulation methods given".into()));
    }
    let truth = scenario_truth(cfg.spec.id);
    let mut rows = Vec::with_capacity(cfg.spec.replicates * cfg.methods.len());
    for r in 0..cfg.spec.replicates {
        let seed = cfg.spec.replicate_seed(r);
        let (train, test) = generate(&cfg.spec, &truth, seed)?;
        for &method in &cfg.methods {
            let row = match run_method(method, cfg, &train, seed) {
                Ok((params, beta, df_count, converged)) => {
                    let m = metrics(&truth, &test, &beta)?;
                    SimRow {
                        replicate: r,
                        method: method.name(),
                        pred_mse: m.pred_mse,
                        param_mse: m.param_mse,
                        lambda: if method == SimMethod::Ols { 0.0 } else { params.lambda },
                        s: if method.method().uses_shape() { params.s } else { f64::NAN },
                        df_count,
                        converged,
                    }
                }
                Err(e) => {
                    log::warn!("replicate {r} method {}: {e}", method.name());
                    SimRow {
                        replicate: r,
                        method: method.name(),
                        pred_mse: f64::NAN,
                        param_mse: f64::NAN,
                        lambda: f64::NAN,
                        s: f64::NAN,
                        df_count: 0,
                        converged: false,
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Median of the finite values, or NaN when there are none.
pub fn median(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
