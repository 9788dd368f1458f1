//! Design matrix, response and the standardization that produced them.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column means and sample standard deviations of X plus the response mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub x_mean: Vec<f64>,
    pub x_scale: Vec<f64>,
    pub y_mean: f64,
}

impl Standardization {
    /// Estimate centering and scaling from raw data. Scale uses the n-1
    /// denominator.
    pub fn fit(x: &DMatrix<f64>, y: &DVector<f64>, names: &[String]) -> Result<Self> {
        let n = x.nrows();
        if n < 2 {
            return Err(Error::Data(format!("standardization needs at least 2 rows, got {n}")));
        }
        let mut x_mean = Vec::with_capacity(x.ncols());
        let mut x_scale = Vec::with_capacity(x.ncols());
        for (j, col) in x.column_iter().enumerate() {
            let mean = col.mean();
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let sd = var.sqrt();
            if sd.is_nan() || sd <= 0.0 || sd <= 1e-12 * mean.abs() {
                let name = names.get(j).map(String::as_str).unwrap_or("?");
                return Err(Error::Data(format!(
                    "column `{name}` has zero variance and cannot be standardized"
                )));
            }
            x_mean.push(mean);
            x_scale.push(sd);
        }
        Ok(Standardization {
            x_mean,
            x_scale,
            y_mean: y.mean(),
        })
    }

    pub fn apply_x(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut z = x.clone();
        for (j, mut col) in z.column_iter_mut().enumerate() {
            let (m, sd) = (self.x_mean[j], self.x_scale[j]);
            col.apply(|v| *v = (*v - m) / sd);
        }
        z
    }

    pub fn apply_y(&self, y: &DVector<f64>) -> DVector<f64> {
        y.map(|v| v - self.y_mean)
    }

    pub fn unstandardize_x(&self, z: &DMatrix<f64>) -> DMatrix<f64> {
        let mut x = z.clone();
        for (j, mut col) in x.column_iter_mut().enumerate() {
            let (m, sd) = (self.x_mean[j], self.x_scale[j]);
            col.apply(|v| *v = *v * sd + m);
        }
        x
    }

    /// Coefficients and intercept on the original measurement scale.
    pub fn original_coefficients(&self, beta: &DVector<f64>) -> (DVector<f64>, f64) {
        let b = DVector::from_iterator(
            beta.len(),
            beta.iter().zip(&self.x_scale).map(|(b, sd)| b / sd),
        );
        let intercept = self.y_mean - b.iter().zip(&self.x_mean).map(|(b, m)| b * m).sum::<f64>();
        (b, intercept)
    }
}

/// Regression data: n x p predictors and an n-vector response. When built by
/// [`Dataset::standardize`] the columns of X have mean 0 and unit sample
/// variance and y has mean 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    feature_names: Vec<String>,
    standardization: Option<Standardization>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, feature_names: Vec<String>) -> Result<Self> {
        let (n, p) = x.shape();
        if n == 0 || p == 0 {
            return Err(Error::Data(format!("dataset must be non-empty, got {n}x{p}")));
        }
        if y.len() != n {
            return Err(Error::Shape {
                what: "response length",
                expected: n,
                got: y.len(),
            });
        }
        if feature_names.len() != p {
            return Err(Error::Shape {
                what: "feature names",
                expected: p,
                got: feature_names.len(),
            });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Data("dataset contains non-finite values".into()));
        }
        Ok(Dataset {
            x,
            y,
            feature_names,
            standardization: None,
        })
    }

    /// Dataset with default names x1..xp.
    pub fn from_xy(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Dataset::new(x, y, names)
    }

    /// Standardize X and center y with statistics from this dataset.
    pub fn standardize(self) -> Result<Self> {
        let st = Standardization::fit(&self.x, &self.y, &self.feature_names)?;
        Ok(self.with_standardization(st))
    }

    /// Apply externally estimated statistics (e.g. from a training split).
    pub fn with_standardization(self, st: Standardization) -> Self {
        Dataset {
            x: st.apply_x(&self.x),
            y: st.apply_y(&self.y),
            feature_names: self.feature_names,
            standardization: Some(st),
        }
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn standardization(&self) -> Option<&Standardization> {
        self.standardization.as_ref()
    }

    pub fn rss(&self, beta: &DVector<f64>) -> f64 {
        (&self.y - &self.x * beta).norm_squared()
    }

    pub(crate) fn check_beta(&self, beta: &DVector<f64>) -> Result<()> {
        if beta.len() == self.p() {
            Ok(())
        } else {
            Err(Error::Shape {
                what: "coefficient vector",
                expected: self.p(),
                got: beta.len(),
            })
        }
    }

    /// Rows selected by index, keeping names and standardization metadata.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            x: self.x.select_rows(rows),
            y: self.y.select_rows(rows),
            feature_names: self.feature_names.clone(),
            standardization: self.standardization.clone(),
        }
    }
}

/// A numeric CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Data(format!("cannot open {}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::Data("empty file: no header row".into()));
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row_no = i + 2; // 1-based, header is line 1
            let row = rec
                .iter()
                .enumerate()
                .map(|(j, cell)| match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(Error::Data(format!(
                        "non-numeric cell `{cell}` at row {row_no}, column `{}`",
                        header[j]
                    ))),
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Data("empty file: no data rows".into()));
        }
        Ok(CsvTable { header, rows })
    }

    /// Split into a dataset with `response` as y and every other column as X.
    pub fn into_dataset(self, response: &str) -> Result<Dataset> {
        let ycol = self
            .header
            .iter()
            .position(|h| h == response)
            .ok_or_else(|| Error::Data(format!("response column `{response}` not found")))?;
        let names: Vec<String> = self
            .header
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != ycol)
            .map(|(_, h)| h.clone())
            .collect();
        let n = self.rows.len();
        let p = names.len();
        let mut x = DMatrix::zeros(n, p);
        let mut y = DVector::zeros(n);
        for (i, row) in self.rows.iter().enumerate() {
            y[i] = row[ycol];
            let mut k = 0;
            for (j, v) in row.iter().enumerate() {
                if j != ycol {
                    x[(i, k)] = *v;
                    k += 1;
                }
            }
        }
        Dataset::new(x, y, names)
    }
}

/// Read a CSV file with a header row; `response` names the y column.
pub fn load_dataset(path: &Path, response: &str, standardize: bool) -> Result<Dataset> {
    let data = CsvTable::read(path)?.into_dataset(response)?;
    if standardize {
        data.standardize()
    } else {
        Ok(data)
    }
}
