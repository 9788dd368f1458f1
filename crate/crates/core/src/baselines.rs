//! OLS, ridge and lasso on the same `RSS + lambda * penalty` scale as the
//! dlasso objective. Under that scale the lasso soft-thresholds at lambda/2.

use nalgebra::DVector;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar_threshold::soft_threshold;
use crate::solver::{hat_trace, ridge_solve};

pub const LASSO_TOL: f64 = 1e-10;
pub const LASSO_MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaselineKind {
    Ols,
    Ridge(f64),
    Lasso(f64),
}

/// Coefficients plus the bookkeeping shared with dlasso fits.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineFit {
    pub beta: DVector<f64>,
    pub converged: bool,
    pub df_count: usize,
    pub df_trace: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    pub beta: DVector<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("lambda must be finite and >= 0, got {lambda}")))
    }
}

/// Minimizer of the residual sum of squares via the normal equations.
pub fn fit_ols(data: &Dataset) -> Result<DVector<f64>> {
    fit_ridge(data, 0.0)
}

/// `(X'X + lambda I)^-1 X'y`.
pub fn fit_ridge(data: &Dataset, lambda: f64) -> Result<DVector<f64>> {
    check_lambda(lambda)?;
    let gram = data.x().tr_mul(data.x());
    let xty = data.x().tr_mul(data.y());
    ridge_solve(&gram, &xty, &DVector::from_element(data.p(), lambda), 0)
}

/// Cyclic coordinate descent for `RSS + lambda * ||b||_1`.
pub fn fit_lasso_cd(data: &Dataset, lambda: f64) -> Result<LassoFit> {
    check_lambda(lambda)?;
    let x = data.x();
    let p = data.p();
    let col_sq: Vec<f64> = x.column_iter().map(|c| c.norm_squared()).collect();
    let mut beta = DVector::<f64>::zeros(p);
    let mut resid = data.y().clone();
    let half = 0.5 * lambda;

    for sweep in 1..=LASSO_MAX_SWEEPS {
        let mut max_change: f64 = 0.0;
        for j in 0..p {
            if col_sq[j] == 0.0 {
                continue;
            }
            let xj = x.column(j);
            let old = beta[j];
            let z = xj.dot(&resid) + col_sq[j] * old;
            let new = soft_threshold(z, half) / col_sq[j];
            if new != old {
                resid.axpy(old - new, &xj, 1.0);
                beta[j] = new;
                max_change = max_change.max((new - old).abs());
            }
        }
        if max_change < LASSO_TOL {
            return Ok(LassoFit {
                beta,
                sweeps: sweep,
                converged: true,
            });
        }
    }
    log::warn!("lasso coordinate descent hit {LASSO_MAX_SWEEPS} sweeps");
    Ok(LassoFit {
        beta,
        sweeps: LASSO_MAX_SWEEPS,
        converged: false,
    })
}

/// `RSS + lambda * ||b||_1`.
pub fn lasso_objective(data: &Dataset, beta: &DVector<f64>, lambda: f64) -> f64 {
    data.rss(beta) + lambda * beta.lp_norm(1)
}

impl BaselineKind {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineKind::Ols => "ols",
            BaselineKind::Ridge(_) => "ridge",
            BaselineKind::Lasso(_) => "lasso",
        }
    }

    pub fn lambda(&self) -> f64 {
        match *self {
            BaselineKind::Ols => 0.0,
            BaselineKind::Ridge(l) | BaselineKind::Lasso(l) => l,
        }
    }

    pub fn fit(&self, data: &Dataset) -> Result<BaselineFit> {
        let gram = data.x().tr_mul(data.x());
        match *self {
            BaselineKind::Ols | BaselineKind::Ridge(_) => {
                let lambda = self.lambda();
                let beta = fit_ridge(data, lambda)?;
                let df_trace = hat_trace(&gram, &DVector::from_element(data.p(), lambda))?;
                Ok(BaselineFit {
                    df_count: beta.iter().filter(|b| **b != 0.0).count(),
                    beta,
                    converged: true,
                    df_trace,
                })
            }
            BaselineKind::Lasso(lambda) => {
                let fit = fit_lasso_cd(data, lambda)?;
                let df = fit.beta.iter().filter(|b| **b != 0.0).count();
                Ok(BaselineFit {
                    beta: fit.beta,
                    converged: fit.converged,
                    df_count: df,
                    df_trace: df as f64,
                })
            }
        }
    }
}
