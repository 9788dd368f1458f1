//! Degrees of freedom, information criteria, cross-validation and grid
//! tuning of (lambda, s).

use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::BaselineKind;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::penalty::{PenaltyParams, RIDGE_LIKE_S};
use crate::solver::{effective_df, fit, zero_threshold, FitConfig, FitResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Aic,
    Bic,
    Gcv,
    Cv { k: usize, seed: u64 },
}

impl Criterion {
    pub fn name(&self) -> String {
        match self {
            Criterion::Aic => "aic".into(),
            Criterion::Bic => "bic".into(),
            Criterion::Gcv => "gcv".into(),
            Criterion::Cv { k, .. } => format!("cv{k}"),
        }
    }
}

/// A fitted linear model as seen by the selection criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    pub beta: DVector<f64>,
    /// `beta` with coefficients reported as zero set to exactly zero.
    pub sparse_beta: DVector<f64>,
    pub df_count: usize,
    pub df_trace: f64,
    pub converged: bool,
}

impl FitResult {
    /// Coefficients with everything outside the active set zeroed.
    pub fn sparse_beta(&self) -> DVector<f64> {
        let mut b = DVector::zeros(self.beta.len());
        for &j in &self.active_set {
            b[j] = self.beta[j];
        }
        b
    }

    pub fn to_model_fit(&self) -> ModelFit {
        ModelFit {
            beta: self.beta.clone(),
            sparse_beta: self.sparse_beta(),
            df_count: self.df_count,
            df_trace: self.df_trace,
            converged: self.converged,
        }
    }
}

/// Which estimator a grid search drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dlasso,
    Ols,
    Ridge,
    Lasso,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dlasso => "dlasso",
            Method::Ols => "ols",
            Method::Ridge => "ridge",
            Method::Lasso => "lasso",
        }
    }

    /// Fit at one grid point. `template` supplies dlasso solver settings;
    /// baselines ignore it apart from lambda.
    pub fn fit(&self, data: &Dataset, params: PenaltyParams, template: &FitConfig) -> Result<ModelFit> {
        let baseline = match self {
            Method::Dlasso => {
                let mut cfg = template.clone();
                cfg.params = params;
                return Ok(fit(data, &cfg)?.to_model_fit());
            }
            Method::Ols => BaselineKind::Ols,
            Method::Ridge => BaselineKind::Ridge(params.lambda),
            Method::Lasso => BaselineKind::Lasso(params.lambda),
        };
        let b = baseline.fit(data)?;
        Ok(ModelFit {
            sparse_beta: b.beta.clone(),
            beta: b.beta,
            df_count: b.df_count,
            df_trace: b.df_trace,
            converged: b.converged,
        })
    }

    pub fn uses_shape(&self) -> bool {
        matches!(self, Method::Dlasso)
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dlasso" => Ok(Method::Dlasso),
            "ols" => Ok(Method::Ols),
            "ridge" => Ok(Method::Ridge),
            "lasso" => Ok(Method::Lasso),
            other => Err(Error::Parameter(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuningGrid {
    lambdas: Vec<f64>,
    s_values: Vec<f64>,
}

fn sorted_positive(mut v: Vec<f64>, what: &str) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::Parameter(format!("{what} grid is empty")));
    }
    if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Parameter(format!("{what} grid value {bad} is not positive")));
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect()
}

impl TuningGrid {
    pub fn new(lambdas: Vec<f64>, s_values: Vec<f64>) -> Result<Self> {
        Ok(TuningGrid {
            lambdas: sorted_positive(lambdas, "lambda")?,
            s_values: sorted_positive(s_values, "s")?,
        })
    }

    pub fn default_lambdas() -> Vec<f64> {
        log_grid(1e-3, 1e2, 25)
    }

    pub fn default_s_values(n: usize) -> Vec<f64> {
        vec![0.001, 0.01, 1.0 / (n as f64).sqrt(), 0.1, RIDGE_LIKE_S, 1.0, 10.0, 100.0]
    }

    pub fn default_for(n: usize) -> Self {
        TuningGrid::new(Self::default_lambdas(), Self::default_s_values(n)).expect("default grid is valid")
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s_values
    }

    /// Grid points in s-major order.
    pub fn points(&self) -> Vec<PenaltyParams> {
        self.s_values
            .iter()
            .flat_map(|&s| self.lambdas.iter().map(move |&lambda| PenaltyParams { s, lambda }))
            .collect()
    }
}

/// Active-coefficient count and effective degrees of freedom
/// `tr(X (X'X + Sigma/2)^-1 X')` at a fitted dlasso solution.
pub fn degrees_of_freedom(data: &Dataset, result: &FitResult, config: &FitConfig) -> Result<(usize, f64)> {
    let params = result.params;
    let threshold = zero_threshold(params.s, data.n(), config.report_zero_tol);
    let df_count = result.beta.iter().filter(|b| b.abs() > threshold).count();
    let df_trace = effective_df(data, &result.beta, &params, config.zero_ratio_eps)?;
    Ok((df_count, df_trace))
}

/// Shuffle 0..n with a seeded generator and cut it into k contiguous blocks;
/// the first n % k folds get one extra row.
pub fn cv_folds(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > n {
        return Err(Error::Parameter(format!("CV folds must be in [2, {n}], got {k}")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(idx[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}

fn log_rss_term(n: usize, rss: f64) -> f64 {
    let nf = n as f64;
    let per = rss / nf;
    if per > 0.0 {
        nf * per.ln()
    } else {
        log::warn!("zero residual sum of squares; log-likelihood term clamped");
        nf * f64::MIN_POSITIVE.ln()
    }
}

/// Akaike criterion `n log(RSS/n) + 2 df`.
pub fn aic(n: usize, rss: f64, df: usize) -> f64 {
    log_rss_term(n, rss) + 2.0 * df as f64
}

/// Bayesian criterion `n log(RSS/n) + log(n) df`.
pub fn bic(n: usize, rss: f64, df: usize) -> f64 {
    log_rss_term(n, rss) + (n as f64).ln() * df as f64
}

/// Generalized cross-validation `RSS / (n (1 - df/n)^2)`.
pub fn gcv(n: usize, rss: f64, df_trace: f64) -> Result<f64> {
    let nf = n as f64;
    if df_trace >= nf {
        return Err(Error::GcvUndefined { df_trace, n });
    }
    Ok(rss / (nf * (1.0 - df_trace / nf).powi(2)))
}

/// Mean over folds of the held-out mean squared prediction error, refitting
/// with `refit` on the remaining rows.
pub fn cv_score<F>(data: &Dataset, k: usize, seed: u64, mut refit: F) -> Result<f64>
where
    F: FnMut(&Dataset) -> Result<DVector<f64>>,
{
    let n = data.n();
    let folds = cv_folds(n, k, seed)?;
    let mut in_fold = vec![usize::MAX; n];
    for (f, rows) in folds.iter().enumerate() {
        for &i in rows {
            in_fold[i] = f;
        }
    }
    let mut total = 0.0;
    for (f, held) in folds.iter().enumerate() {
        let train_rows: Vec<usize> = (0..n).filter(|&i| in_fold[i] != f).collect();
        let beta = refit(&data.select_rows(&train_rows))?;
        let test = data.select_rows(held);
        total += test.rss(&beta) / held.len() as f64;
    }
    Ok(total / k as f64)
}

/// Score a fitted model. Information criteria use the sparse coefficients
/// with `df_count`; GCV uses the raw coefficients with `df_trace`.
pub fn score_model<F>(data: &Dataset, model: &ModelFit, crit: Criterion, refit: F) -> Result<f64>
where
    F: FnMut(&Dataset) -> Result<DVector<f64>>,
{
    let n = data.n();
    match crit {
        Criterion::Aic => Ok(aic(n, data.rss(&model.sparse_beta), model.df_count)),
        Criterion::Bic => Ok(bic(n, data.rss(&model.sparse_beta), model.df_count)),
        Criterion::Gcv => gcv(n, data.rss(&model.beta), model.df_trace),
        Criterion::Cv { k, seed } => cv_score(data, k, seed, refit),
    }
}

/// Criterion value for a dlasso fit. CV refits with `config` on each fold.
pub fn criterion_score(data: &Dataset, result: &FitResult, config: &FitConfig, crit: Criterion) -> Result<f64> {
    let mut cfg = config.clone();
    cfg.params = result.params;
    score_model(data, &result.to_model_fit(), crit, |train| Ok(fit(train, &cfg)?.beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneRow {
    pub params: PenaltyParams,
    pub score: f64,
    pub df_count: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub best: PenaltyParams,
    pub best_index: usize,
    pub table: Vec<TuneRow>,
}

/// Exhaustive grid search. Baselines that ignore `s` are evaluated at the
/// first s value only. Ties prefer larger lambda, then larger s.
pub fn tune_method(
    method: Method,
    data: &Dataset,
    grid: &TuningGrid,
    crit: Criterion,
    template: &FitConfig,
) -> Result<TuneOutcome> {
    let points: Vec<PenaltyParams> = match method {
        Method::Dlasso => grid.points(),
        Method::Ols => vec![PenaltyParams { s: grid.s_values()[0], lambda: 0.0 }],
        Method::Ridge | Method::Lasso => grid
            .lambdas()
            .iter()
            .map(|&lambda| PenaltyParams { s: grid.s_values()[0], lambda })
            .collect(),
    };

    let mut table = Vec::with_capacity(points.len());
    let mut failures = Vec::new();
    for params in points {
        let (row, error) = match method.fit(data, params, template) {
            Ok(model) => {
                let refit = |train: &Dataset| Ok(method.fit(train, params, template)?.beta);
                let row = TuneRow {
                    params,
                    score: f64::NAN,
                    df_count: model.df_count,
                    converged: model.converged,
                };
                match score_model(data, &model, crit, refit) {
                    Ok(score) => (TuneRow { score, ..row }, None),
                    Err(e) => (TuneRow { converged: false, ..row }, Some(e.to_string())),
                }
            }
            Err(e) => (
                TuneRow { params, score: f64::NAN, df_count: 0, converged: false },
                Some(e.to_string()),
            ),
        };
        match error {
            Some(e) => failures.push(format!("lambda={} s={}: {e}", params.lambda, params.s)),
            None if !row.converged => {
                failures.push(format!("lambda={} s={}: not converged", params.lambda, params.s))
            }
            None => {}
        }
        table.push(row);
    }

    let best_index = select_best(&table).ok_or_else(|| {
        Error::Tuning(format!("no grid point converged: {}", failures.join("; ")))
    })?;
    Ok(TuneOutcome {
        best: table[best_index].params,
        best_index,
        table,
    })
}

fn select_best(table: &[TuneRow]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, row) in table.iter().enumerate() {
        if !row.converged || !row.score.is_finite() {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &table[b];
                let better = row.score < cur.score
                    || (row.score == cur.score
                        && (row.params.lambda > cur.params.lambda
                            || (row.params.lambda == cur.params.lambda && row.params.s > cur.params.s)));
                Some(if better { i } else { b })
            }
        };
    }
    best
}

/// Tune a dlasso fit with default solver settings.
pub fn tune(data: &Dataset, grid: &TuningGrid, crit: Criterion) -> Result<TuneOutcome> {
    let template = FitConfig::new(PenaltyParams { s: grid.s_values()[0], lambda: 0.0 });
    tune_method(Method::Dlasso, data, grid, crit, &template)
}
