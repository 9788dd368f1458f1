mod common;

use common::csv_text;
use dlasso::dataset::CsvTable;
use dlasso::{load_dataset, Dataset, Error};
use nalgebra::{DMatrix, DVector};
use std::io::Write;

fn data_error(r: dlasso::Result<impl std::fmt::Debug>) -> String {
    match r {
        Err(Error::Data(msg)) => msg,
        other => panic!("expected data error, got {other:?}"),
    }
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn loads_and_standardizes() {
    let rows: Vec<Vec<f64>> = (0..12).map(|i| {
        let t = i as f64;
        vec![t.sin() * 3.0 + 1.0, t * 0.5, (t * 0.7).cos(), 2.0 * t - 1.0]
    }).collect();
    let f = write_temp(&csv_text(&["a", "b", "c", "lpsa"], &rows));
    let d = load_dataset(f.path(), "lpsa", true).unwrap();
    assert_eq!((d.n(), d.p()), (12, 3));
    assert_eq!(d.feature_names(), &["a", "b", "c"]);
    for col in d.x().column_iter() {
        assert!(col.mean().abs() <= 1e-10);
        assert!(((col.variance() * 12.0 / 11.0).sqrt() - 1.0).abs() <= 1e-10);
    }
    assert!(d.y().mean().abs() <= 1e-10);

    let raw = load_dataset(f.path(), "lpsa", false).unwrap();
    assert!(raw.standardization().is_none());
    assert_eq!(raw.y()[3], 5.0);
}

#[test]
fn round_trip_to_original_scale() {
    let x = DMatrix::from_fn(20, 4, |i, j| ((i * 7 + j * 3) as f64).sin() * (j + 1) as f64 * 10.0 + j as f64);
    let y = DVector::from_fn(20, |i, _| i as f64);
    let d = Dataset::from_xy(x.clone(), y).unwrap().standardize().unwrap();
    let back = d.standardization().unwrap().unstandardize_x(d.x());
    assert!((back - &x).amax() <= 1e-12 * x.amax());
}

#[test]
fn original_coefficients_reproduce_predictions() {
    let x = DMatrix::from_fn(15, 3, |i, j| ((i + 2 * j) as f64).cos() * 4.0 + 2.0 * j as f64);
    let y = DVector::from_fn(15, |i, _| (i as f64).sqrt());
    let d = Dataset::from_xy(x.clone(), y.clone()).unwrap().standardize().unwrap();
    let beta = DVector::from_vec(vec![0.3, -1.2, 0.8]);
    let st = d.standardization().unwrap();
    let (b, c) = st.original_coefficients(&beta);
    let pred_std = d.x() * &beta;
    let pred_orig = &x * &b;
    for i in 0..15 {
        assert!((pred_orig[i] + c - (pred_std[i] + st.y_mean)).abs() <= 1e-12);
    }
}

#[test]
fn non_numeric_cell_reports_position() {
    let msg = data_error(CsvTable::from_reader("a,b,lpsa\n1,2,3\n4,oops,6\n".as_bytes()));
    assert!(msg.contains("row 3") && msg.contains("`b`") && msg.contains("oops"), "{msg}");
    let msg = data_error(CsvTable::from_reader("a,lpsa\n1,inf\n".as_bytes()));
    assert!(msg.contains("row 2"), "{msg}");
}

#[test]
fn empty_inputs() {
    assert!(data_error(CsvTable::from_reader("".as_bytes())).contains("empty"));
    assert!(data_error(CsvTable::from_reader("a,lpsa\n".as_bytes())).contains("empty"));
}

#[test]
fn ragged_rows_rejected() {
    assert!(CsvTable::from_reader("a,b,lpsa\n1,2,3\n4,5\n".as_bytes()).is_err());
}

#[test]
fn missing_response_column() {
    let t = CsvTable::from_reader("a,b\n1,2\n3,4\n".as_bytes()).unwrap();
    let msg = data_error(t.into_dataset("lpsa"));
    assert!(msg.contains("lpsa"));
}

#[test]
fn constant_column_named() {
    let f = write_temp("a,flat,lpsa\n1,5,1\n2,5,0\n3,5,2\n");
    let msg = data_error(load_dataset(f.path(), "lpsa", true));
    assert!(msg.contains("`flat`") && msg.contains("zero variance"), "{msg}");
    assert!(load_dataset(f.path(), "lpsa", false).is_ok());
}

#[test]
fn unreadable_path() {
    let msg = data_error(load_dataset(std::path::Path::new("/nonexistent/x.csv"), "lpsa", true));
    assert!(msg.contains("/nonexistent/x.csv"));
}

#[test]
fn construction_checks() {
    assert!(matches!(
        Dataset::from_xy(DMatrix::zeros(3, 2), DVector::zeros(4)),
        Err(Error::Shape { .. })
    ));
    assert!(Dataset::from_xy(DMatrix::zeros(0, 2), DVector::zeros(0)).is_err());
    let mut x = DMatrix::zeros(2, 2);
    x[(1, 1)] = f64::NAN;
    assert!(Dataset::from_xy(x, DVector::zeros(2)).is_err());
}
