//! The dlasso penalty `p(x, s) = x * erf(x / s)` and the smooth |x|
//! approximations it is compared against.
//!
//! Derivatives, with `u = x / s` and `phi(u) = e^(-u^2) / sqrt(pi)`:
//!
//! ```text
//! p'(x)  = erf(u) + 2 u phi(u)
//! p''(x) = 4 phi(u) (1 - u^2) / s
//! ```
//!
//! `| |x| - p(x, s) | <= 2 s phi(u)` for every x, so the penalty reaches |x|
//! exponentially fast as s shrinks. With `s = 2 / sqrt(pi)` the curvature at
//! zero is 2 and the penalty matches x^2 near the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{erf, erfc, normal_pdf_halfvar, ErfKernel};

/// Shape value at which the penalty has the curvature of x^2 at the origin.
pub const RIDGE_LIKE_S: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Below this |x/s| the penalty is evaluated as x*erf(u); above it as
/// |x| - |x|*erfc(|u|) so that |x| - p keeps its relative accuracy.
const COMPLEMENT_SWITCH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyParams {
    pub s: f64,
    pub lambda: f64,
}

impl PenaltyParams {
    pub fn new(s: f64, lambda: f64) -> Result<Self> {
        check_shape(s)?;
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(PenaltyParams { s, lambda })
    }

    pub fn validate(&self) -> Result<()> {
        PenaltyParams::new(self.s, self.lambda).map(|_| ())
    }
}

pub(crate) fn check_shape(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "shape s must be finite and > 0, got {s}"
        )))
    }
}

/// Penalty evaluator with a selectable erf kernel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dlasso {
    kernel: ErfKernel,
}

impl Dlasso {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evaluate through an approximate erf kernel instead of the reference.
    pub fn with_kernel(kernel: ErfKernel) -> Self {
        Dlasso { kernel }
    }

    pub fn kernel(&self) -> ErfKernel {
        self.kernel
    }

    #[inline]
    fn erf(&self, u: f64) -> f64 {
        match self.kernel {
            ErfKernel::Reference => erf(u),
            k => k.erf(u),
        }
    }

    /// p(x, s). `s` is assumed positive.
    #[inline]
    pub fn value(&self, x: f64, s: f64) -> f64 {
        let u = x / s;
        if self.kernel == ErfKernel::Reference && u.abs() > COMPLEMENT_SWITCH {
            let a = x.abs();
            a - a * erfc(u.abs())
        } else {
            x * self.erf(u)
        }
    }

    #[inline]
    pub fn grad(&self, x: f64, s: f64) -> f64 {
        let u = x / s;
        self.erf(u) + 2.0 * u * normal_pdf_halfvar(u)
    }

    #[inline]
    pub fn hess(&self, x: f64, s: f64) -> f64 {
        let u = x / s;
        4.0 * normal_pdf_halfvar(u) * (1.0 - u * u) / s
    }

    /// p'(x)/x, continuous through zero where it equals p''(0).
    #[inline]
    pub fn grad_ratio(&self, x: f64, s: f64, zero_eps: f64) -> f64 {
        if x.abs() < zero_eps {
            4.0 / (s * std::f64::consts::PI.sqrt())
        } else {
            self.grad(x, s) / x
        }
    }
}

pub fn dlasso_value(x: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    Ok(Dlasso::new().value(x, s))
}

pub fn dlasso_grad(x: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    Ok(Dlasso::new().grad(x, s))
}

pub fn dlasso_hess(x: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    Ok(Dlasso::new().hess(x, s))
}

/// Second derivative written as the unsimplified sum of its three terms.
pub fn dlasso_hess_expanded(x: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    let u = x / s;
    let phi = normal_pdf_halfvar(u);
    let cubic = if x == 0.0 { 0.0 } else { 4.0 / x * u.powi(3) * phi };
    Ok(2.0 / s * phi + 2.0 / s * phi - cubic)
}

/// Gap between |x| and the penalty and its closed-form upper bound 2 s phi(x/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsGap {
    pub gap: f64,
    pub bound: f64,
}

pub fn abs_gap_bound(x: f64, s: f64) -> Result<AbsGap> {
    let p = dlasso_value(x, s)?;
    Ok(AbsGap {
        gap: x.abs() - p,
        bound: 2.0 * s * normal_pdf_halfvar(x / s),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmoothAbsKind {
    Dlasso,
    /// sqrt(x^2 + s^2)
    SqrtShift,
    /// s * log(2 + e^(-x/s) + e^(x/s))
    LogExp,
}

impl SmoothAbsKind {
    pub const ALL: [SmoothAbsKind; 3] =
        [SmoothAbsKind::Dlasso, SmoothAbsKind::SqrtShift, SmoothAbsKind::LogExp];
}

pub fn smooth_abs(kind: SmoothAbsKind, x: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    Ok(match kind {
        SmoothAbsKind::Dlasso => Dlasso::new().value(x, s),
        SmoothAbsKind::SqrtShift => x.hypot(s),
        SmoothAbsKind::LogExp => {
            let m = x.abs() / s;
            s * (m + (2.0 * (-m).exp() + (-x / s - m).exp() + (x / s - m).exp()).ln())
        }
    })
}

/// Lower bracket x^2 / sqrt(x^2 + s^2) <= |x|. Only used for approximation
/// comparisons.
pub fn sqrt_lower_bound(x: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x * x / x.hypot(s))
}
