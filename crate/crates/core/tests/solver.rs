mod common;

use common::random_instance;
use dlasso::baselines::{fit_lasso_cd, fit_ols};
use dlasso::penalty::{dlasso_grad, RIDGE_LIKE_S};
use dlasso::scalar_threshold::{scalar_estimate, ThresholdQuery};
use dlasso::solver::{gradient, objective, sigma_diag, stationarity_residual};
use dlasso::special_fn::erf;
use dlasso::{fit, Dataset, Error, FitConfig, Init, PenaltyParams};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn config(s: f64, lambda: f64) -> FitConfig {
    FitConfig::new(PenaltyParams::new(s, lambda).unwrap())
}

fn sup(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax()
}

fn certificate_bound(data: &Dataset, tol: f64) -> f64 {
    10.0 * tol * (1.0 + data.x().tr_mul(data.y()).amax())
}

#[test]
fn lambda_zero_is_ols() {
    for seed in 0..5 {
        let d = random_instance(40, 8, seed);
        let r = fit(&d, &config(0.5, 0.0)).unwrap();
        assert!(r.converged);
        assert!(sup(&r.beta, &fit_ols(&d).unwrap()) <= 1e-8);
    }
}

#[test]
fn singular_system_names_iteration() {
    let d = random_instance(5, 8, 3);
    let err = fit(&d, &config(0.5, 0.0).with_init(Init::Zeros)).unwrap_err();
    match err {
        Error::Singular { iteration } => {
            assert_eq!(iteration, 1);
            assert!(err.to_string().contains("iteration 1"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn identity_design_matches_scalar_estimates() {
    let y = DVector::from_vec(vec![-3.0, -0.8, -0.2, 0.05, 0.4, 0.9, 1.7, 4.0]);
    let d = Dataset::from_xy(DMatrix::identity(8, 8), y.clone()).unwrap();
    for &(s, lambda) in &[(0.01, 1.0), (0.3, 1.0), (1.0, 2.0), (RIDGE_LIKE_S, 0.7), (5.0, 3.0)] {
        let r = fit(&d, &config(s, lambda)).unwrap();
        for i in 0..8 {
            let params = PenaltyParams::new(s, lambda).unwrap();
            let e = scalar_estimate(ThresholdQuery { y: y[i], params }).unwrap();
            assert!((r.beta[i] - e).abs() <= 1e-4, "s={s} y={}: {} vs {e}", y[i], r.beta[i]);
        }
    }
}

#[test]
fn objective_trivial_cases() {
    let d = random_instance(30, 5, 11);
    let params = PenaltyParams::new(0.2, 3.0).unwrap();
    let zero = DVector::zeros(5);
    assert_eq!(objective(&d, &zero, &params).unwrap(), d.y().norm_squared());
    let b = DVector::from_fn(5, |j, _| j as f64 - 2.0);
    let free = PenaltyParams::new(0.2, 0.0).unwrap();
    assert_eq!(objective(&d, &b, &free).unwrap(), d.rss(&b));
    assert!(matches!(objective(&d, &DVector::zeros(4), &params), Err(Error::Shape { .. })));
}

#[test]
fn objective_termwise() {
    let d = random_instance(30, 5, 12);
    let b = DVector::from_vec(vec![1.3, -0.02, 0.0, 0.4, -2.2]);
    let (s, lambda) = (0.3, 1.7);
    let mut rss = 0.0;
    for i in 0..d.n() {
        let mut fitted = 0.0;
        for j in 0..d.p() {
            fitted += d.x()[(i, j)] * b[j];
        }
        rss += (d.y()[i] - fitted).powi(2);
    }
    let mut pen = 0.0;
    for &bj in b.iter() {
        pen += bj * erf(bj / s);
    }
    let want = rss + lambda * pen;
    let got = objective(&d, &b, &PenaltyParams::new(s, lambda).unwrap()).unwrap();
    assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
}

#[test]
fn sigma_diag_values() {
    let s = 0.2;
    let params = PenaltyParams::new(s, 1.0).unwrap();
    let at_zero = sigma_diag(&DVector::from_vec(vec![0.0]), &params, 1e-8)[0];
    let limit = 4.0 / (s * std::f64::consts::PI.sqrt());
    assert!((at_zero - limit).abs() <= 1e-12 * limit);
    let numeric = dlasso_grad(1e-9, s).unwrap() / 1e-9;
    assert!((at_zero - numeric).abs() <= 1e-6 * limit);

    let lasso = sigma_diag(&DVector::from_vec(vec![2.0]), &PenaltyParams::new(0.01, 1.0).unwrap(), 1e-8)[0];
    assert!((lasso - 0.5).abs() <= 1e-6);
}

#[test]
fn reported_objective_is_recomputable() {
    let d = random_instance(40, 8, 21);
    for &(s, lambda) in &[(0.01, 1.0), (0.3, 5.0), (3.0, 2.0)] {
        let r = fit(&d, &config(s, lambda)).unwrap();
        let o = objective(&d, &r.beta, &r.params).unwrap();
        assert!((r.objective - o).abs() <= 1e-10 * o);
        assert!(r.df_count == r.active_set.len() && r.df_count <= 8);
        assert!(r.df_trace >= 0.0 && r.df_trace <= 8.0);
    }
}

#[test]
fn stationarity_certificate() {
    for seed in 0..10 {
        let d = random_instance(40, 8, 100 + seed);
        for &s in &[0.001, 0.01, 0.1, 1.0, 10.0] {
            for &lambda in &[0.5, 2.0, 10.0] {
                let cfg = config(s, lambda);
                let r = fit(&d, &cfg).unwrap();
                assert!(r.converged, "seed={seed} s={s} lambda={lambda}");
                let res = stationarity_residual(&d, &r.beta, &r.params);
                assert!(res <= certificate_bound(&d, cfg.tol), "seed={seed} s={s} lambda={lambda}: {res}");
            }
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let d = random_instance(20, 4, 5);
    let params = PenaltyParams::new(0.3, 2.0).unwrap();
    let b = DVector::from_vec(vec![0.7, -0.1, 0.02, 1.5]);
    let g = gradient(&d, &b, &params);
    let h = 1e-6;
    for j in 0..4 {
        let mut up = b.clone();
        let mut down = b.clone();
        up[j] += h;
        down[j] -= h;
        let fd = (objective(&d, &up, &params).unwrap() - objective(&d, &down, &params).unwrap()) / (2.0 * h);
        assert!((g[j] - fd).abs() <= 1e-5 * (1.0 + fd.abs()), "{j}: {} vs {fd}", g[j]);
    }
}

#[test]
fn monotone_from_initial_value() {
    let d = random_instance(40, 8, 33);
    for &s in &[0.005, 0.05, 0.5] {
        let cfg = config(s, 4.0).with_init(Init::Zeros);
        let r = fit(&d, &cfg).unwrap();
        assert!(r.objective <= d.y().norm_squared());
    }
}

#[test]
fn shrinkage_path() {
    let lambdas = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    for seed in 0..5 {
        let d = random_instance(40, 8, 200 + seed);
        for &s in &[0.01, 0.3, 2.0] {
            let norms: Vec<f64> = lambdas.iter().map(|&l| fit(&d, &config(s, l)).unwrap().beta.norm()).collect();
            for w in norms.windows(2) {
                assert!(w[1] <= w[0] + 1e-8, "seed={seed} s={s}: {norms:?}");
            }
        }
    }
}

#[test]
fn warm_start_invariance_in_convex_regime() {
    for seed in 0..5 {
        let d = random_instance(40, 8, 300 + seed);
        for &s in &[RIDGE_LIKE_S, 2.0, 10.0] {
            for &lambda in &[0.5, 5.0, 30.0] {
                let a = fit(&d, &config(s, lambda)).unwrap();
                let b = fit(&d, &config(s, lambda).with_init(Init::Zeros)).unwrap();
                assert!((a.objective - b.objective).abs() <= 1e-6, "seed={seed} s={s} lambda={lambda}");
            }
        }
    }
}

#[test]
fn approaches_lasso_as_shape_shrinks() {
    for seed in 0..5 {
        let d = random_instance(40, 8, 400 + seed);
        let lasso = fit_lasso_cd(&d, 1.0).unwrap().beta;
        let dist: Vec<f64> = [1.0, 0.1, 0.01, 0.001]
            .iter()
            .map(|&s| sup(&fit(&d, &config(s, 1.0)).unwrap().beta, &lasso))
            .collect();
        for w in dist.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "seed={seed}: {dist:?}");
        }
        assert!(dist[3] < dist[0]);
        assert!(dist[3] <= 1e-3, "seed={seed}: {dist:?}");
    }
}

#[test]
fn large_shape_is_ols() {
    for seed in 0..10 {
        let d = random_instance(40, 8, 500 + seed);
        let r = fit(&d, &config(100.0, 1.0)).unwrap();
        assert!(sup(&r.beta, &fit_ols(&d).unwrap()) <= 1e-2);
        assert_eq!(r.df_count, 8);
    }
}

#[test]
fn default_zero_reporting() {
    // far from the lasso regime only report_zero_tol applies
    let d = random_instance(40, 8, 7);
    let r = fit(&d, &config(1.0, 1.0)).unwrap();
    for j in 0..8 {
        assert_eq!(r.active_set.contains(&j), r.beta[j].abs() > 1e-4);
    }
}

#[test]
fn invalid_config() {
    let d = random_instance(10, 2, 1);
    let mut cfg = config(0.1, 1.0);
    cfg.tol = 0.0;
    assert!(matches!(fit(&d, &cfg), Err(Error::Parameter(_))));
    let mut cfg = config(0.1, 1.0);
    cfg.max_iter = 0;
    assert!(matches!(fit(&d, &cfg), Err(Error::Parameter(_))));
    let cfg = config(0.1, 1.0).with_init(Init::Supplied(DVector::zeros(3)));
    assert!(matches!(fit(&d, &cfg), Err(Error::Shape { .. })));
}

#[test]
fn max_iter_exhaustion_is_flagged() {
    let d = random_instance(40, 8, 9);
    let mut cfg = config(0.01, 2.0).with_init(Init::Zeros);
    cfg.max_iter = 1;
    let r = fit(&d, &cfg).unwrap();
    assert!(!r.converged);
    assert_eq!(r.iterations, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_diag_nonnegative(b in prop::collection::vec(-5.0f64..5.0, 1..10), s in 1e-3f64..10.0, lambda in 0.0f64..10.0) {
        let params = PenaltyParams::new(s, lambda).unwrap();
        let sig = sigma_diag(&DVector::from_vec(b), &params, 1e-8);
        prop_assert!(sig.iter().all(|v| v.is_finite() && *v >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn converged_fits_are_stationary(seed in 0u64..10_000, log_s in -3.0f64..1.5, log_l in -1.0f64..1.5) {
        let d = random_instance(30, 6, seed);
        let cfg = config(10f64.powf(log_s), 10f64.powf(log_l));
        let r = fit(&d, &cfg).unwrap();
        if r.converged {
            prop_assert!(stationarity_residual(&d, &r.beta, &r.params) <= certificate_bound(&d, cfg.tol));
        }
    }
}
