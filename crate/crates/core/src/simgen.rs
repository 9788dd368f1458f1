//! Simulated regression scenarios and their error metrics.
//!
//! Rows of X are drawn from N(0, R) as `L e` with `R = L L'` and `e` standard
//! normal; `y = X beta + sigma * e'`. Normals come from the ziggurat sampler
//! of `rand_distr` driven by ChaCha8 seeded with a `u64`, so a seed fully
//! determines a replicate.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::{Dataset, Standardization};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    /// Sparse beta = (3, 1.5, 0, 0, 2, 0, 0, 0), AR(0.5) correlation.
    Standard,
    /// All eight coefficients 0.5, AR(0.5) correlation.
    SmallBetas,
    /// Fifteen predictors in three blocks of five.
    CorrelatedGroups,
}

impl ScenarioId {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(ScenarioId::Standard),
            2 => Ok(ScenarioId::SmallBetas),
            3 => Ok(ScenarioId::CorrelatedGroups),
            _ => Err(Error::Parameter(format!("scenario must be 1, 2 or 3, got {k}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: ScenarioId,
    pub n_total: usize,
    pub n_train: usize,
    pub seed: u64,
    pub replicates: usize,
}

impl ScenarioSpec {
    pub fn new(id: ScenarioId, seed: u64) -> Self {
        ScenarioSpec {
            id,
            n_total: 240,
            n_train: 40,
            seed,
            replicates: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_train >= self.n_total {
            return Err(Error::Parameter(format!(
                "need 0 < n_train < n_total, got {} / {}",
                self.n_train, self.n_total
            )));
        }
        if self.replicates == 0 {
            return Err(Error::Parameter("replicates must be >= 1".into()));
        }
        Ok(())
    }

    /// Seed of replicate `r`.
    pub fn replicate_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add(r as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTruth {
    pub beta: DVector<f64>,
    pub correlation: DMatrix<f64>,
    /// Noise standard deviation.
    pub sigma: f64,
}

fn ar_correlation(p: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |i, j| rho.powi((i as i32 - j as i32).abs()))
}

pub fn scenario_truth(id: ScenarioId) -> ScenarioTruth {
    match id {
        ScenarioId::Standard => ScenarioTruth {
            beta: DVector::from_vec(vec![3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]),
            correlation: ar_correlation(8, 0.5),
            sigma: 3f64.sqrt(),
        },
        ScenarioId::SmallBetas => ScenarioTruth {
            beta: DVector::from_element(8, 0.5),
            correlation: ar_correlation(8, 0.5),
            sigma: 3f64.sqrt(),
        },
        ScenarioId::CorrelatedGroups => {
            let mut beta = vec![1.0, 2.0, 3.0, 4.0, 5.0];
            beta.extend([0.5; 5]);
            beta.extend([0.0; 5]);
            let within = [0.9, 0.5, 0.0];
            let correlation = DMatrix::from_fn(15, 15, |i, j| {
                if i == j {
                    1.0
                } else if i / 5 == j / 5 {
                    within[i / 5]
                } else {
                    0.0
                }
            });
            ScenarioTruth {
                beta: DVector::from_vec(beta),
                correlation,
                sigma: 15f64.sqrt(),
            }
        }
    }
}

/// Draw `n` rows and responses from the scenario model.
pub fn sample(truth: &ScenarioTruth, n: usize, rng: &mut impl Rng) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let p = truth.beta.len();
    let chol = truth
        .correlation
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Parameter("correlation matrix is not positive definite".into()))?;
    let l = chol.l();
    let mut x = DMatrix::zeros(n, p);
    let mut e = DVector::zeros(p);
    for i in 0..n {
        for v in e.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let row = &l * &e;
        for j in 0..p {
            x[(i, j)] = row[j];
        }
    }
    let noise = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y = &x * &truth.beta + noise * truth.sigma;
    Ok((x, y))
}

/// Train/test split for one replicate; both halves are standardized with the
/// training statistics.
pub fn generate(spec: &ScenarioSpec, truth: &ScenarioTruth, seed: u64) -> Result<(Dataset, Dataset)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, y) = sample(truth, spec.n_total, &mut rng)?;
    let train_rows: Vec<usize> = (0..spec.n_train).collect();
    let test_rows: Vec<usize> = (spec.n_train..spec.n_total).collect();
    let train_raw = Dataset::from_xy(x.select_rows(&train_rows), y.select_rows(&train_rows))?;
    let test_raw = Dataset::from_xy(x.select_rows(&test_rows), y.select_rows(&test_rows))?;
    let st = Standardization::fit(train_raw.x(), train_raw.y(), train_raw.feature_names())?;
    Ok((
        train_raw.with_standardization(st.clone()),
        test_raw.with_standardization(st),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Mean squared prediction error on the test rows.
    pub pred_mse: f64,
    /// `(b - beta)' R (b - beta)` with b on the original predictor scale.
    pub param_mse: f64,
}

/// `beta_hat` is on the standardized scale of `test`.
pub fn metrics(truth: &ScenarioTruth, test: &Dataset, beta_hat: &DVector<f64>) -> Result<Metrics> {
    test.check_beta(beta_hat)?;
    if truth.beta.len() != beta_hat.len() {
        return Err(Error::Shape {
            what: "true coefficients",
            expected: beta_hat.len(),
            got: truth.beta.len(),
        });
    }
    let pred_mse = test.rss(beta_hat) / test.n() as f64;
    let original = match test.standardization() {
        Some(st) => st.original_coefficients(beta_hat).0,
        None => beta_hat.clone(),
    };
    let diff = original - &truth.beta;
    let param_mse = diff.dot(&(&truth.correlation * &diff));
    Ok(Metrics { pred_mse, param_mse })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truths_match_scenarios() {
        let t = scenario_truth(ScenarioId::Standard);
        assert_eq!(t.beta.as_slice(), &[3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.correlation[(0, 2)], 0.25);
        assert_eq!(t.sigma, 3f64.sqrt());
        let t2 = scenario_truth(ScenarioId::SmallBetas);
        assert!(t2.beta.iter().all(|b| *b == 0.5));
        let t3 = scenario_truth(ScenarioId::CorrelatedGroups);
        assert_eq!(t3.beta.len(), 15);
        assert_eq!(t3.correlation[(0, 4)], 0.9);
        assert_eq!(t3.correlation[(5, 9)], 0.5);
        assert_eq!(t3.correlation[(10, 14)], 0.0);
        assert_eq!(t3.correlation[(0, 5)], 0.0);
        assert!((t3.sigma - 15f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn correlations_are_spd() {
        for id in [ScenarioId::Standard, ScenarioId::SmallBetas, ScenarioId::CorrelatedGroups] {
            let r = scenario_truth(id).correlation;
            assert!(r.clone().cholesky().is_some());
            assert_eq!(r.transpose(), r);
        }
    }

    #[test]
    fn invalid_specs() {
        let mut spec = ScenarioSpec::new(ScenarioId::Standard, 1);
        spec.n_train = 240;
        assert!(spec.validate().is_err());
        spec.n_train = 40;
        spec.replicates = 0;
        assert!(spec.validate().is_err());
        assert!(ScenarioId::from_number(4).is_err());
    }

    #[test]
    fn metrics_identity_cases() {
        let truth = ScenarioTruth {
            beta: DVector::from_vec(vec![1.0, -2.0]),
            correlation: DMatrix::identity(2, 2),
            sigma: 0.0,
        };
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let y = &x * &truth.beta;
        let test = Dataset::from_xy(x, y).unwrap();
        let m = metrics(&truth, &test, &truth.beta).unwrap();
        assert_eq!((m.pred_mse, m.param_mse), (0.0, 0.0));
        let off = DVector::from_vec(vec![2.0, -2.0]);
        assert_eq!(metrics(&truth, &test, &off).unwrap().param_mse, 1.0);
        assert!(metrics(&truth, &test, &DVector::zeros(3)).is_err());
    }
}
