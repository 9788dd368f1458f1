#![allow(dead_code)]

use dlasso::Dataset;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Standardized n x p instance with i.i.d. normal predictors and
/// y = X b + noise, b alternating between signal and zero.
pub fn random_instance(n: usize, p: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    let beta = DVector::from_fn(p, |j, _| match j % 4 {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    let noise = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y = &x * &beta + noise;
    Dataset::from_xy(x, y).unwrap().standardize().unwrap()
}

/// Composite 5-point Gauss-Legendre rule over `panels` equal panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * h;
        let panel: f64 = NODES.iter().zip(WEIGHTS).map(|(t, w)| w * f(mid + 0.5 * h * t)).sum();
        total += 0.5 * h * panel;
    }
    total
}

/// Minimizer of a scalar function over [lo, hi]: coarse scan at `coarse`,
/// then a fine scan at `fine` around every coarse local minimum.
pub fn grid_argmin(f: impl Fn(f64) -> f64, lo: f64, hi: f64, coarse: f64, fine: f64) -> f64 {
    let scan = |lo: f64, hi: f64, step: f64| -> Vec<(f64, f64)> {
        let n = ((hi - lo) / step).ceil() as usize;
        (0..=n)
            .map(|i| {
                let b = (lo + i as f64 * step).min(hi);
                (b, f(b))
            })
            .collect()
    };
    let pts = scan(lo, hi, coarse);
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 0..pts.len() {
        let left = if i == 0 { f64::INFINITY } else { pts[i - 1].1 };
        let right = pts.get(i + 1).map_or(f64::INFINITY, |p| p.1);
        if pts[i].1 <= left && pts[i].1 <= right {
            let c = pts[i].0;
            for (b, v) in scan((c - coarse).max(lo), (c + coarse).min(hi), fine) {
                if v < best.1 {
                    best = (b, v);
                }
            }
        }
    }
    best.0
}

pub fn csv_text(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}
