mod common;

use common::grid_argmin;
use dlasso::penalty::PenaltyParams;
use dlasso::scalar_threshold::*;
use dlasso::solver::WELL_EDGE;
use dlasso::special_fn::erf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn est(y: f64, lambda: f64, s: f64) -> f64 {
    scalar_estimate(ThresholdQuery { y, params: PenaltyParams::new(s, lambda).unwrap() }).unwrap()
}

fn oracle(y: f64, lambda: f64, s: f64) -> f64 {
    let f = |b: f64| (y - b).powi(2) + lambda * b * erf(b / s);
    grid_argmin(f, -y.abs() - 1.0, y.abs() + 1.0, 1e-3, 1e-5)
}

#[test]
fn zero_observation() {
    for &(l, s) in &[(1.0, 0.01), (3.0, 1.0), (0.0, 5.0)] {
        assert_eq!(est(0.0, l, s), 0.0);
    }
}

#[test]
fn non_finite_observation() {
    let params = PenaltyParams::new(0.1, 1.0).unwrap();
    assert!(scalar_estimate(ThresholdQuery { y: f64::NAN, params }).is_err());
    assert!(scalar_estimate(ThresholdQuery { y: f64::INFINITY, params }).is_err());
}

#[test]
fn lasso_regime_matches_soft_threshold() {
    assert!((est(3.0, 1.0, 0.01) - 2.5).abs() < 1e-3);
    assert!((oracle(3.0, 1.0, 0.01) - 2.5).abs() < 1e-3);
}

#[test]
fn large_shape_is_ols_like() {
    for &y in &[-4.0, -1.5, 0.3, 2.0, 5.0] {
        let e = est(y, 1.0, 20.0);
        let o = oracle(y, 1.0, 20.0);
        assert!((e - o).abs() <= 1e-4, "y={y}: {e} vs {o}");
        assert!(e.abs() < y.abs() && e * y > 0.0);
    }
}

#[test]
fn matches_grid_oracle_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1a2);
    for _ in 0..1000 {
        let y = rng.random_range(-5.0..5.0);
        let lambda = rng.random_range(0.0..4.0);
        let s = 10f64.powf(rng.random_range(-2.0..1.3));
        let e = est(y, lambda, s);
        let o = oracle(y, lambda, s);
        assert!((e - o).abs() <= 1e-4, "y={y} lambda={lambda} s={s}: {e} vs {o}");
    }
}

#[test]
fn odd_and_shrinking() {
    for &(l, s) in &[(1.0, 0.01), (1.0, 1.0), (2.5, 0.3), (4.0, 3.0)] {
        let mut prev = f64::NEG_INFINITY;
        let mut y = -5.0;
        while y <= 5.0 {
            let e = est(y, l, s);
            assert_eq!(est(-y, l, s), -e);
            assert!(e.abs() <= y.abs());
            assert!(e >= prev, "not monotone at y={y}");
            prev = e;
            y += 0.01;
        }
    }
}

#[test]
fn threshold_regimes() {
    let curve = threshold_curve(PenaltyParams::new(0.01, 1.0).unwrap(), -5.0, 5.0, 0.01).unwrap();
    // Away from the jump the curve is the soft threshold. The jump itself
    // sits past lambda/2 because the penalty slope overshoots one.
    let jump = curve.windows(2).find(|w| w[0].0 > 0.0 && w[1].1 - w[0].1 > 0.03).map(|w| w[1].0).unwrap();
    assert!(jump > 0.5 && jump < 0.6, "{jump}");
    let sup = curve
        .iter()
        .filter(|(y, _)| y.abs() >= 0.6)
        .map(|(y, b)| (b - soft_threshold(*y, 0.5)).abs())
        .fold(0.0, f64::max);
    assert!(sup <= 5e-3, "{sup}");
    // below lambda/2 the penalty slope stays under one; up to the jump the
    // estimate stays where the penalty is convex
    for (y, b) in &curve {
        if y.abs() <= 0.5 {
            assert!(b.abs() <= WELL_EDGE * 0.01, "y={y}: {b}");
        } else if y.abs() < jump - 0.005 {
            assert!(b.abs() <= 0.01, "y={y}: {b}");
        }
    }
    // s = 1: smooth through zero with nonzero slope
    let h = 1e-3;
    let slope = (est(h, 1.0, 1.0) - est(-h, 1.0, 1.0)) / (2.0 * h);
    assert!(slope > 0.1, "{slope}");
}

#[test]
fn curve_endpoints_and_errors() {
    let p = PenaltyParams::new(0.5, 1.0).unwrap();
    let c = threshold_curve(p, -1.0, 1.0, 0.25).unwrap();
    assert_eq!(c.len(), 9);
    assert_eq!(c[0].0, -1.0);
    assert_eq!(c[8].0, 1.0);
    assert!(threshold_curve(p, 1.0, -1.0, 0.1).is_err());
    assert!(threshold_curve(p, -1.0, 1.0, 0.0).is_err());
}
