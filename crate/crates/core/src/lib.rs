//! Regularized least squares with the differentiable lasso penalty
//! `p(x, s) = x * erf(x / s)`.
//!
//! Small `s` makes the penalty indistinguishable from |x| away from the
//! origin, `s = 2/sqrt(pi)` makes it quadratic near zero, and large `s`
//! fades it out altogether. Because the penalty is smooth, fits can be
//! computed by iterated ridge solves and checked through the gradient.

pub mod baselines;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod model_select;
pub mod penalty;
pub mod report;
pub mod scalar_threshold;
pub mod simgen;
pub mod simulate;
pub mod solver;
pub mod special_fn;

pub use dataset::{load_dataset, Dataset, Standardization};
pub use error::{Error, Result};
pub use model_select::{Criterion, Method, TuningGrid};
pub use penalty::{Dlasso, PenaltyParams};
pub use solver::{fit, FitConfig, FitResult, Init};
