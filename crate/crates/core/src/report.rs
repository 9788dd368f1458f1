//! JSON and CSV documents emitted by the command-line tool.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! inputs give identical bytes. Missing values are written as `NA` in CSV and
//! `null` in JSON.

use std::io::Write;

use nalgebra::DVector;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::Result;
use crate::model_select::{aic, bic, ModelFit, TuneRow};
use crate::simulate::SimRow;

/// Name/value pairs serialized as a JSON object in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Named(pub Vec<(String, f64)>);

impl Serialize for Named {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &finite_or_none(*v))?;
        }
        map.end()
    }
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Tuning parameters of a fit; `s` is absent for methods without a shape.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct ReportParams {
    pub lambda: f64,
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TuningInfo {
    pub criterion: String,
    pub score: Option<f64>,
    pub grid_points: usize,
}

/// Serialized form of a fit.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FitReport {
    pub method: String,
    pub params: ReportParams,
    pub converged: bool,
    pub iterations: usize,
    pub objective: f64,
    pub df_count: usize,
    pub df_trace: f64,
    pub n: usize,
    pub p: usize,
    pub rss: f64,
    pub aic: f64,
    pub bic: f64,
    pub active_set: Vec<String>,
    /// Coefficients on the standardized scale, keyed by feature name.
    pub coefficients: Named,
    /// Coefficients on the original predictor scale; absent when the data
    /// were not standardized.
    pub coefficients_original: Option<Named>,
    pub intercept_original: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuning: Option<TuningInfo>,
}

impl FitReport {
    /// The active set is read off the nonzero entries of `model.sparse_beta`.
    pub fn new(
        method: &str,
        data: &Dataset,
        model: &ModelFit,
        params: ReportParams,
        iterations: usize,
        objective: f64,
    ) -> Self {
        let names = data.feature_names();
        let named = |b: &DVector<f64>| Named(names.iter().cloned().zip(b.iter().copied()).collect());
        let active_set = model
            .sparse_beta
            .iter()
            .zip(names)
            .filter(|(b, _)| **b != 0.0)
            .map(|(_, n)| n.clone())
            .collect();
        let (orig, intercept) = match data.standardization() {
            Some(st) => {
                let (b, c) = st.original_coefficients(&model.beta);
                (Some(named(&b)), Some(c))
            }
            None => (None, None),
        };
        let sparse_rss = data.rss(&model.sparse_beta);
        FitReport {
            method: method.to_string(),
            params,
            converged: model.converged,
            iterations,
            objective,
            df_count: model.df_count,
            df_trace: model.df_trace,
            n: data.n(),
            p: data.p(),
            rss: data.rss(&model.beta),
            aic: aic(data.n(), sparse_rss, model.df_count),
            bic: bic(data.n(), sparse_rss, model.df_count),
            active_set,
            coefficients: named(&model.beta),
            coefficients_original: orig,
            intercept_original: intercept,
            tuning: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else {
        format!("{v}")
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// `uses_shape = false` writes the s column as `NA`.
pub fn write_tune_table<W: Write>(out: W, table: &[TuneRow], uses_shape: bool) -> Result<()> {
    write_rows(
        out,
        &["lambda", "s", "score", "df_count", "converged"],
        table.iter().map(|r| {
            vec![
                fmt(r.params.lambda),
                if uses_shape { fmt(r.params.s) } else { "NA".into() },
                fmt(r.score),
                r.df_count.to_string(),
                r.converged.to_string(),
            ]
        }),
    )
}

pub fn write_sim_rows<W: Write>(out: W, rows: &[SimRow]) -> Result<()> {
    write_rows(
        out,
        &["replicate", "method", "pred_mse", "param_mse", "lambda", "s", "df_count", "converged"],
        rows.iter().map(|r| {
            vec![
                r.replicate.to_string(),
                r.method.clone(),
                fmt(r.pred_mse),
                fmt(r.param_mse),
                fmt(r.lambda),
                fmt(r.s),
                r.df_count.to_string(),
                r.converged.to_string(),
            ]
        }),
    )
}

pub fn write_pairs<W: Write>(out: W, header: [&str; 2], rows: &[(f64, f64)]) -> Result<()> {
    write_rows(out, &header, rows.iter().map(|(a, b)| vec![fmt(*a), fmt(*b)]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub kernel: String,
    pub grid_max_abs_error: f64,
    /// NaN when timing is disabled.
    pub mean_ns_per_call: f64,
}

pub fn write_bench<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    write_rows(
        out,
        &["kernel", "grid_max_abs_error", "mean_ns_per_call"],
        rows.iter().map(|r| {
            vec![
                r.kernel.clone(),
                fmt(r.grid_max_abs_error),
                if r.mean_ns_per_call.is_nan() {
                    "NA".into()
                } else {
                    format!("{:.2}", r.mean_ns_per_call)
                },
            ]
        }),
    )
}

/// Rows of x followed by one column per named curve.
pub fn write_columns<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    write_rows(out, header, rows.iter().map(|r| r.iter().map(|v| fmt(*v)).collect()))
}
