//! Penalized least squares under the dlasso penalty,
//!
//! ```text
//! L(b) = (y - X b)'(y - X b) + lambda * sum_j p(b_j, s),
//! ```
//!
//! fitted by iterated ridge solves. Each step replaces the penalty by the
//! quadratic that touches it at the current iterate,
//!
//! ```text
//! p(b) ~ p(b0) + p'(b0) / (2 b0) * (b^2 - b0^2),
//! ```
//!
//! which majorizes `p` because `p'(b)/b` decreases in |b|. Minimizing the
//! surrogate gives `(X'X + Sigma/2) b = X'y` with
//! `Sigma = lambda * diag(p'(b0_j) / b0_j)`. The ratio is finite at zero, so
//! no coefficient is ever dropped from the system.
//!
//! Close to the lasso limit these steps contract slowly, so each iteration
//! also tries a Newton step from the new iterate and keeps it when the
//! Hessian is positive definite and the objective drops further.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::penalty::{Dlasso, PenaltyParams};
use crate::special_fn::ErfKernel;

/// Objective increase tolerated as rounding noise, relative to its size.
const DESCENT_SLACK: f64 = 1e-12;
const MAX_HALVINGS: usize = 20;
/// Pivot ratio below which a Cholesky factor is treated as singular.
const PIVOT_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    #[default]
    RidgeWarmStart,
    Zeros,
    Supplied(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub params: PenaltyParams,
    /// Stop when the largest coefficient change falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// |b| below this uses the analytic limit of p'(b)/b.
    pub zero_ratio_eps: f64,
    /// Coefficients at or below this magnitude are reported as zero.
    pub report_zero_tol: f64,
    pub init: Init,
    pub kernel: ErfKernel,
}

impl FitConfig {
    pub fn new(params: PenaltyParams) -> Self {
        FitConfig {
            params,
            tol: 1e-8,
            max_iter: 500,
            zero_ratio_eps: 1e-8,
            report_zero_tol: 1e-4,
            init: Init::RidgeWarmStart,
            kernel: ErfKernel::Reference,
        }
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Parameter(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be >= 1".into()));
        }
        if !(self.zero_ratio_eps > 0.0 && self.report_zero_tol > 0.0) {
            return Err(Error::Parameter("zero tolerances must be > 0".into()));
        }
        Ok(())
    }
}

/// Default shape for n observations: 1/sqrt(n), below which estimates behave
/// like the lasso.
pub fn default_shape(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

/// Root of `erf(u) + 2u exp(-u^2)/sqrt(pi) = 1`: the penalty slope reaches
/// one at `|b| = WELL_EDGE * s`.
pub const WELL_EDGE: f64 = 0.531_596_885_149_393_2;

/// Magnitude at or below which a fitted coefficient counts as zero.
///
/// A coefficient that the lasso would set to zero settles inside the
/// penalty's well, where the penalty slope is below one: `|b| < WELL_EDGE * s`.
/// When `s` is in the lasso regime (`s <= 1/sqrt(n)`) that radius is used if
/// it exceeds `report_zero_tol`; otherwise `report_zero_tol` alone applies.
pub fn zero_threshold(s: f64, n: usize, report_zero_tol: f64) -> f64 {
    if s <= default_shape(n) {
        report_zero_tol.max(WELL_EDGE * s)
    } else {
        report_zero_tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub beta: DVector<f64>,
    /// Indices with |beta_j| above the zero threshold.
    pub active_set: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub df_count: usize,
    pub df_trace: f64,
    pub params: PenaltyParams,
}

/// RSS plus lambda times the summed penalty.
pub fn objective(data: &Dataset, beta: &DVector<f64>, params: &PenaltyParams) -> Result<f64> {
    data.check_beta(beta)?;
    params.validate()?;
    Ok(objective_with(&Dlasso::new(), data, beta, params))
}

fn objective_with(pen: &Dlasso, data: &Dataset, beta: &DVector<f64>, params: &PenaltyParams) -> f64 {
    let penalty: f64 = beta.iter().map(|&b| pen.value(b, params.s)).sum();
    data.rss(beta) + params.lambda * penalty
}

/// Diagonal of `lambda * p'(b_j)/b_j`; the limit `lambda * 4/(s sqrt(pi))`
/// is used when |b_j| < zero_ratio_eps.
pub fn sigma_diag(beta_prev: &DVector<f64>, params: &PenaltyParams, zero_ratio_eps: f64) -> DVector<f64> {
    sigma_diag_with(&Dlasso::new(), beta_prev, params, zero_ratio_eps)
}

fn sigma_diag_with(pen: &Dlasso, beta: &DVector<f64>, params: &PenaltyParams, eps: f64) -> DVector<f64> {
    beta.map(|b| params.lambda * pen.grad_ratio(b, params.s, eps))
}

/// Gradient of the objective, `-2 X'(y - X b) + lambda * p'(b)`.
pub fn gradient(data: &Dataset, beta: &DVector<f64>, params: &PenaltyParams) -> DVector<f64> {
    let pen = Dlasso::new();
    let resid = data.y() - data.x() * beta;
    let mut g = data.x().tr_mul(&resid) * -2.0;
    for (gj, &b) in g.iter_mut().zip(beta.iter()) {
        *gj += params.lambda * pen.grad(b, params.s);
    }
    g
}

/// Sup norm of [`gradient`]; zero at any stationary point.
pub fn stationarity_residual(data: &Dataset, beta: &DVector<f64>, params: &PenaltyParams) -> f64 {
    gradient(data, beta, params).amax()
}

/// Cholesky of a symmetric matrix, rejecting numerically singular factors.
pub(crate) fn spd_factor(a: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    let scale = a.diagonal().amax();
    let chol = Cholesky::new(a)?;
    let l = chol.l_dirty();
    let min_pivot = (0..l.nrows()).map(|i| l[(i, i)] * l[(i, i)]).fold(f64::INFINITY, f64::min);
    if min_pivot.is_nan() || min_pivot <= PIVOT_RTOL * scale {
        return None;
    }
    Some(chol)
}

pub(crate) fn ridge_solve(gram: &DMatrix<f64>, xty: &DVector<f64>, diag: &DVector<f64>, iteration: usize) -> Result<DVector<f64>> {
    let mut a = gram.clone();
    for j in 0..a.nrows() {
        a[(j, j)] += diag[j];
    }
    let chol = spd_factor(a).ok_or(Error::Singular { iteration })?;
    Ok(chol.solve(xty))
}

/// tr(X (X'X + D)^-1 X') = tr((X'X + D)^-1 X'X).
pub(crate) fn hat_trace(gram: &DMatrix<f64>, diag: &DVector<f64>) -> Result<f64> {
    let mut a = gram.clone();
    for j in 0..a.nrows() {
        a[(j, j)] += diag[j];
    }
    let chol = spd_factor(a).ok_or(Error::Singular { iteration: 0 })?;
    Ok(chol.solve(gram).trace())
}

/// Effective degrees of freedom of the ridge system solved at `beta`.
pub fn effective_df(data: &Dataset, beta: &DVector<f64>, params: &PenaltyParams, zero_ratio_eps: f64) -> Result<f64> {
    let gram = data.x().tr_mul(data.x());
    let half_sigma = sigma_diag(beta, params, zero_ratio_eps) * 0.5;
    hat_trace(&gram, &half_sigma)
}

fn grad_sup(pen: &Dlasso, gram: &DMatrix<f64>, xty: &DVector<f64>, beta: &DVector<f64>, params: &PenaltyParams) -> f64 {
    let g = (gram * beta - xty) * 2.0;
    g.iter()
        .zip(beta.iter())
        .map(|(gj, &b)| (gj + params.lambda * pen.grad(b, params.s)).abs())
        .fold(0.0, f64::max)
}

/// Full Newton step from `beta`, when the Hessian
/// `2 X'X + lambda diag(p''(b))` is positive definite there.
fn newton_step(
    pen: &Dlasso,
    data: &Dataset,
    gram: &DMatrix<f64>,
    xty: &DVector<f64>,
    beta: &DVector<f64>,
    params: &PenaltyParams,
) -> Option<(DVector<f64>, f64)> {
    let mut h = gram * 2.0;
    let mut g = (gram * beta - xty) * 2.0;
    for j in 0..beta.len() {
        h[(j, j)] += params.lambda * pen.hess(beta[j], params.s);
        g[j] += params.lambda * pen.grad(beta[j], params.s);
    }
    let step = spd_factor(h)?.solve(&g);
    let next = beta - step;
    let obj = objective_with(pen, data, &next, params);
    obj.is_finite().then_some((next, obj))
}

pub fn fit(data: &Dataset, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    let params = config.params;
    let pen = Dlasso::with_kernel(config.kernel);
    let x = data.x();
    let gram = x.tr_mul(x);
    let xty = x.tr_mul(data.y());
    let p = data.p();

    let mut beta = match &config.init {
        Init::Zeros => DVector::zeros(p),
        Init::Supplied(b) => {
            data.check_beta(b)?;
            b.clone()
        }
        Init::RidgeWarmStart => {
            ridge_solve(&gram, &xty, &DVector::from_element(p, params.lambda), 0)?
        }
    };
    let mut obj = objective_with(&pen, data, &beta, &params);
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=config.max_iter {
        iterations = k;
        let half_sigma = sigma_diag_with(&pen, &beta, &params, config.zero_ratio_eps) * 0.5;
        let mut cand = ridge_solve(&gram, &xty, &half_sigma, k)?;
        let mut cand_obj = objective_with(&pen, data, &cand, &params);

        let slack = DESCENT_SLACK * obj.abs().max(1.0);
        if cand_obj > obj + slack {
            let direction = &cand - &beta;
            let mut step = 0.5;
            let mut accepted = false;
            for _ in 0..MAX_HALVINGS {
                let trial = &beta + &direction * step;
                let trial_obj = objective_with(&pen, data, &trial, &params);
                if trial_obj <= obj + slack {
                    cand = trial;
                    cand_obj = trial_obj;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                log::warn!("objective increased at iteration {k}; stopping");
                break;
            }
        }

        // Near the optimum the objective gain of a Newton step is below
        // rounding, so a step within the slack is kept if the gradient drops.
        if let Some((newton, newton_obj)) = newton_step(&pen, data, &gram, &xty, &cand, &params) {
            let cand_slack = DESCENT_SLACK * cand_obj.abs().max(1.0);
            if newton_obj < cand_obj
                || (newton_obj <= cand_obj + cand_slack
                    && grad_sup(&pen, &gram, &xty, &newton, &params) < grad_sup(&pen, &gram, &xty, &cand, &params))
            {
                cand = newton;
                cand_obj = newton_obj;
            }
        }

        let delta = (&cand - &beta).amax();
        beta = cand;
        obj = cand_obj;
        if delta < config.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::debug!("dlasso fit did not converge after {iterations} iterations");
    }

    let threshold = zero_threshold(params.s, data.n(), config.report_zero_tol);
    let active_set: Vec<usize> = (0..p).filter(|&j| beta[j].abs() > threshold).collect();
    let half_sigma = sigma_diag_with(&pen, &beta, &params, config.zero_ratio_eps) * 0.5;
    let df_trace = hat_trace(&gram, &half_sigma)?;
    Ok(FitResult {
        objective: objective_with(&pen, data, &beta, &params),
        df_count: active_set.len(),
        active_set,
        beta,
        iterations,
        converged,
        df_trace,
        params,
    })
}
