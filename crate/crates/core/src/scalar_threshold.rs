//! One-dimensional dlasso estimator for an identity design.
//!
//! Minimizes `(y - b)^2 + lambda * p(b, s)`. The penalty is not convex for
//! |b| > s, so the stationarity equation
//!
//! ```text
//! lambda * p'(b, s) - 2 (y - b) = 0
//! ```
//!
//! can have several roots. All of them are bracketed and the global
//! minimizer is returned, which makes the thresholding rule single valued.

use crate::error::{Error, Result};
use crate::penalty::{Dlasso, PenaltyParams};
use crate::special_fn::normal_pdf_halfvar;

const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdQuery {
    pub y: f64,
    pub params: PenaltyParams,
}

fn objective(pen: &Dlasso, y: f64, b: f64, p: &PenaltyParams) -> f64 {
    (y - b).powi(2) + p.lambda * pen.value(b, p.s)
}

/// Beyond `s * U` the stationarity function is strictly increasing: its slope
/// `2 + lambda * p''` can only go negative where `lambda * 4 phi(u) (u^2 - 1) / s > 2`,
/// and `phi(u) (u^2 - 1)` decreases for u > sqrt(2).
fn monotone_from(p: &PenaltyParams) -> f64 {
    let excess = |u: f64| p.lambda * 4.0 * normal_pdf_halfvar(u) * (u * u - 1.0) / p.s - 2.0;
    let mut lo = std::f64::consts::SQRT_2;
    if excess(lo) <= 0.0 {
        return lo;
    }
    let mut hi = 2.0 * lo;
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All stationary points of the scalar objective in (0, a] for y = a > 0.
fn stationary_points(a: f64, p: &PenaltyParams) -> Vec<f64> {
    let pen = Dlasso::new();
    let g = |b: f64| p.lambda * pen.grad(b, p.s) - 2.0 * (a - b);

    let step = p.s.min(1.0) / 100.0;
    let fine_end = a.min(p.s * monotone_from(p));
    let mut roots = Vec::new();

    let mut lo = 0.0;
    let mut g_lo = g(lo);
    let n = (fine_end / step).ceil() as usize;
    for i in 1..=n {
        let hi = if i == n { fine_end } else { i as f64 * step };
        let g_hi = g(hi);
        if g_hi == 0.0 {
            roots.push(hi);
        } else if g_lo != 0.0 && (g_lo < 0.0) != (g_hi < 0.0) {
            roots.push(bisect(g, lo, hi));
        }
        lo = hi;
        g_lo = g_hi;
    }
    if fine_end < a {
        let g_end = g(a);
        if g_lo < 0.0 && g_end > 0.0 {
            roots.push(bisect(g, fine_end, a));
        }
    }
    roots
}

/// Global minimizer of `(y - b)^2 + lambda * p(b, s)`.
pub fn scalar_estimate(q: ThresholdQuery) -> Result<f64> {
    if !q.y.is_finite() {
        return Err(Error::Domain(format!("observation must be finite, got {}", q.y)));
    }
    q.params.validate()?;
    let p = q.params;
    let a = q.y.abs();
    if a == 0.0 {
        return Ok(0.0);
    }
    if p.lambda == 0.0 {
        return Ok(q.y);
    }

    // The minimizer shares the sign of y and never exceeds |y|, so the
    // search runs on [0, |y|] for the positive problem.
    let pen = Dlasso::new();
    let mut best = 0.0;
    let mut best_val = objective(&pen, a, 0.0, &p);
    for b in stationary_points(a, &p).into_iter().chain(std::iter::once(a)) {
        let v = objective(&pen, a, b, &p);
        if v < best_val {
            best = b;
            best_val = v;
        }
    }
    Ok(best.copysign(q.y))
}

/// Soft thresholding `sign(y) * max(|y| - t, 0)`.
pub fn soft_threshold(y: f64, t: f64) -> f64 {
    if y > t {
        y - t
    } else if y < -t {
        y + t
    } else {
        0.0
    }
}

/// Points of the thresholding curve for y in [ymin, ymax].
pub fn threshold_curve(params: PenaltyParams, ymin: f64, ymax: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Parameter(format!("step must be > 0, got {step}")));
    }
    if !(ymin.is_finite() && ymax.is_finite() && ymin <= ymax) {
        return Err(Error::Parameter(format!("invalid range [{ymin}, {ymax}]")));
    }
    let n = ((ymax - ymin) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| {
            let y = ymin + i as f64 * step;
            scalar_estimate(ThresholdQuery { y, params }).map(|b| (y, b))
        })
        .collect()
}
