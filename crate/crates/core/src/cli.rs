//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for usage and input errors, 2 for
//! computation errors (including non-convergence under `--strict`).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{fit_lasso_cd, lasso_objective, BaselineKind};
use crate::dataset::{load_dataset, Dataset};
use crate::error::Error;
use crate::model_select::{tune_method, Criterion, Method, ModelFit, TuningGrid};
use crate::penalty::{smooth_abs, sqrt_lower_bound, PenaltyParams, SmoothAbsKind};
use crate::report::{self, BenchRow, FitReport, ReportParams, TuningInfo};
use crate::scalar_threshold::threshold_curve;
use crate::simgen::{ScenarioId, ScenarioSpec};
use crate::simulate::{run_simulation, SimMethod, SimulationConfig};
use crate::solver::{default_shape, fit, FitConfig, Init};
use crate::special_fn::{erf, ErfKernel};

pub const OUT_DIR_ENV: &str = "DLASSO_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "dlasso", version, about = "Differentiable lasso regression")]
pub struct Cli {
    /// Directory for outputs given as relative paths, and for default file
    /// names when --out is omitted.
    #[arg(long, global = true, env = OUT_DIR_ENV, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one model and write its coefficients as JSON.
    Fit(FitArgs),
    /// Score a (lambda, s) grid and write the table as CSV.
    Tune(TuneArgs),
    /// Run the replicated simulation study.
    Simulate(SimulateArgs),
    /// Scalar estimate as a function of the observation.
    ThresholdCurve(CurveArgs),
    /// Accuracy and speed of the erf kernels.
    BenchErf(BenchArgs),
    /// |x| next to its smooth approximations.
    AbsApprox(AbsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Dlasso,
    Ols,
    Ridge,
    Lasso,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Dlasso => Method::Dlasso,
            MethodArg::Ols => Method::Ols,
            MethodArg::Ridge => Method::Ridge,
            MethodArg::Lasso => Method::Lasso,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Aic,
    Bic,
    Gcv,
    Cv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Ridge,
    Zeros,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,
    /// Name of the response column.
    #[arg(long, default_value = "lpsa")]
    pub response: String,
    /// Use the columns as given instead of standardizing them.
    #[arg(long)]
    pub no_standardize: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "ridge")]
    pub init: InitArg,
    /// erf kernel used inside the dlasso solver.
    #[arg(long, default_value = "reference")]
    pub kernel: String,
    /// Coefficients at or below this magnitude are reported as zero.
    #[arg(long, default_value_t = 1e-4)]
    pub report_zero_tol: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Comma-separated lambda grid (default: 25 log-spaced values 1e-3..1e2).
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub lambdas: Option<Vec<f64>>,
    /// Comma-separated s grid (default depends on n).
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub s_values: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub cv_seed: u64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "dlasso")]
    pub method: MethodArg,
    #[arg(long, conflicts_with_all = ["tune_lambda", "tune"])]
    pub lambda: Option<f64>,
    /// Shape parameter (default 1/sqrt(n)).
    #[arg(long, conflicts_with = "tune")]
    pub s: Option<f64>,
    /// Pick lambda by this criterion with s held fixed.
    #[arg(long, value_enum, conflicts_with = "tune")]
    pub tune_lambda: Option<CriterionArg>,
    /// Pick lambda and s jointly by this criterion.
    #[arg(long, value_enum)]
    pub tune: Option<CriterionArg>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Exit with status 2 when the fit did not converge.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "dlasso")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "bic")]
    pub criterion: CriterionArg,
    /// Hold s fixed at this value.
    #[arg(long, conflicts_with = "s_values")]
    pub s: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub strict: bool,
    /// Score table (CSV).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Fit at the selected grid point (JSON).
    #[arg(long, value_name = "PATH")]
    pub best_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub scenario: u8,
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated: dlasso, dlasso-s, dlasso-s<value>, lasso, ridge, ols.
    #[arg(long, value_delimiter = ',', default_value = "dlasso,dlasso-s,lasso,ridge,ols")]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = 240)]
    pub n_total: usize,
    #[arg(long, default_value_t = 40)]
    pub n_train: usize,
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub s_values: Option<Vec<f64>>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub ymin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub ymax: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Passes over the grid when timing each kernel.
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    /// Write NA instead of timings, making the output reproducible.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AbsArgs {
    #[arg(long, default_value_t = 0.1)]
    pub s: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Data(_) | Error::Shape { .. } | Error::Io(_) | Error::Csv(_) => {
                Failure::Usage(e.to_string())
            }
            Error::Domain(_)
            | Error::Singular { .. }
            | Error::GcvUndefined { .. }
            | Error::Tuning(_)
            | Error::Json(_) => Failure::Compute(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parse `args` (including the program name) and run the command. Output
/// without a destination goes to `stdout`; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Compute(m) => m,
            };
            let _ = writeln!(stderr, "error: {msg}");
            f.code()
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let out = Output { dir: cli.out_dir.as_deref() };
    match &cli.command {
        Command::Fit(a) => cmd_fit(a, &out, stdout, stderr),
        Command::Tune(a) => cmd_tune(a, &out, stdout, stderr),
        Command::Simulate(a) => cmd_simulate(a, &out, stdout),
        Command::ThresholdCurve(a) => cmd_curve(a, &out, stdout),
        Command::BenchErf(a) => cmd_bench(a, &out, stdout),
        Command::AbsApprox(a) => cmd_abs(a, &out, stdout),
    }
}

struct Output<'a> {
    dir: Option<&'a Path>,
}

impl Output<'_> {
    /// Destination for an output: explicit path (relative to the output
    /// directory when one is set), else the default name in the output
    /// directory, else none.
    fn resolve(&self, explicit: Option<&Path>, default_name: &str) -> Option<PathBuf> {
        match (explicit, self.dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p.to_path_buf()),
            (None, Some(dir)) => Some(dir.join(default_name)),
            (None, None) => None,
        }
    }

    fn emit(&self, bytes: &[u8], explicit: Option<&Path>, default_name: &str, stdout: &mut dyn Write) -> CmdResult {
        match self.resolve(explicit, default_name) {
            Some(path) => {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)
                        .map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
                }
                std::fs::write(&path, bytes).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
            }
            None => stdout.write_all(bytes).map_err(|e| usage(format!("cannot write output: {e}"))),
        }
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> crate::Result<()>) -> std::result::Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn load(a: &DataArgs) -> std::result::Result<Dataset, Failure> {
    if !a.data.is_file() {
        return Err(usage(format!("cannot read data file {}", a.data.display())));
    }
    Ok(load_dataset(&a.data, &a.response, !a.no_standardize)?)
}

fn solver_template(a: &SolverArgs, s: f64) -> std::result::Result<FitConfig, Failure> {
    let kernel: ErfKernel = a.kernel.parse()?;
    let mut cfg = FitConfig::new(PenaltyParams { s, lambda: 0.0 });
    cfg.tol = a.tol;
    cfg.max_iter = a.max_iter;
    cfg.report_zero_tol = a.report_zero_tol;
    cfg.kernel = kernel;
    cfg.init = match a.init {
        InitArg::Ridge => Init::RidgeWarmStart,
        InitArg::Zeros => Init::Zeros,
    };
    Ok(cfg)
}

fn criterion(c: CriterionArg, g: &GridArgs) -> Criterion {
    match c {
        CriterionArg::Aic => Criterion::Aic,
        CriterionArg::Bic => Criterion::Bic,
        CriterionArg::Gcv => Criterion::Gcv,
        CriterionArg::Cv => Criterion::Cv { k: g.folds, seed: g.cv_seed },
    }
}

/// Fit `method` at `params` and describe it for output.
pub fn fit_report(
    method: Method,
    data: &Dataset,
    params: PenaltyParams,
    template: &FitConfig,
) -> crate::Result<FitReport> {
    let rp = ReportParams {
        lambda: params.lambda,
        s: method.uses_shape().then_some(params.s),
    };
    let (model, iterations, objective) = match method {
        Method::Dlasso => {
            let mut cfg = template.clone();
            cfg.params = params;
            let r = fit(data, &cfg)?;
            (r.to_model_fit(), r.iterations, r.objective)
        }
        Method::Lasso => {
            let f = fit_lasso_cd(data, params.lambda)?;
            let df = f.beta.iter().filter(|b| **b != 0.0).count();
            let objective = lasso_objective(data, &f.beta, params.lambda);
            let model = ModelFit {
                sparse_beta: f.beta.clone(),
                beta: f.beta,
                df_count: df,
                df_trace: df as f64,
                converged: f.converged,
            };
            (model, f.sweeps, objective)
        }
        Method::Ols | Method::Ridge => {
            let kind = if method == Method::Ols {
                BaselineKind::Ols
            } else {
                BaselineKind::Ridge(params.lambda)
            };
            let b = kind.fit(data)?;
            let objective = data.rss(&b.beta) + kind.lambda() * b.beta.norm_squared();
            let model = ModelFit {
                sparse_beta: b.beta.clone(),
                beta: b.beta,
                df_count: b.df_count,
                df_trace: b.df_trace,
                converged: b.converged,
            };
            (model, 1, objective)
        }
    };
    Ok(FitReport::new(method.name(), data, &model, rp, iterations, objective))
}

fn lambda_grid(g: &GridArgs) -> Vec<f64> {
    g.lambdas.clone().unwrap_or_else(TuningGrid::default_lambdas)
}

fn cmd_fit(a: &FitArgs, out: &Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let method: Method = a.method.into();
    if !method.uses_shape() && a.s.is_some() {
        return Err(usage(format!("--s does not apply to --method {}", method.name())));
    }
    let tuning = a.tune_lambda.or(a.tune);
    if method == Method::Ols && (a.lambda.is_some() || tuning.is_some()) {
        return Err(usage("--method ols takes no lambda or tuning flags"));
    }
    if method != Method::Ols && a.lambda.is_none() && tuning.is_none() {
        return Err(usage("give --lambda, --tune-lambda or --tune"));
    }
    if a.grid.s_values.is_some() && a.tune.is_none() {
        return Err(usage("--s-values requires --tune"));
    }
    if a.grid.lambdas.is_some() && tuning.is_none() {
        return Err(usage("--lambdas requires --tune-lambda or --tune"));
    }

    let data = load(&a.data)?;
    let s = a.s.unwrap_or_else(|| default_shape(data.n()));
    let template = solver_template(&a.solver, s)?;

    let (params, tuning_info) = match tuning {
        None => {
            let params = PenaltyParams::new(s, a.lambda.unwrap_or(0.0))?;
            (params, None)
        }
        Some(c) => {
            let s_values = match (a.tune, &a.grid.s_values) {
                (Some(_), Some(v)) => v.clone(),
                (Some(_), None) => TuningGrid::default_s_values(data.n()),
                (None, _) => vec![s],
            };
            let grid = TuningGrid::new(lambda_grid(&a.grid), s_values)?;
            let crit = criterion(c, &a.grid);
            let outcome = tune_method(method, &data, &grid, crit, &template)?;
            let row = &outcome.table[outcome.best_index];
            let info = TuningInfo {
                criterion: crit.name(),
                score: row.score.is_finite().then_some(row.score),
                grid_points: outcome.table.len(),
            };
            (outcome.best, Some(info))
        }
    };

    let mut rep = fit_report(method, &data, params, &template)?;
    rep.tuning = tuning_info;
    out.emit(rep.to_json()?.as_bytes(), a.out.as_deref(), "fit.json", stdout)?;
    if !rep.converged {
        let _ = writeln!(stderr, "warning: {} fit did not converge", method.name());
        if a.strict {
            return Err(Failure::Compute("fit did not converge".into()));
        }
    }
    Ok(())
}

fn cmd_tune(a: &TuneArgs, out: &Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let method: Method = a.method.into();
    if !method.uses_shape() && (a.s.is_some() || a.grid.s_values.is_some()) {
        return Err(usage(format!("s flags do not apply to --method {}", method.name())));
    }
    let data = load(&a.data)?;
    let s_values = match (a.s, &a.grid.s_values) {
        (Some(s), _) => vec![s],
        (None, Some(v)) => v.clone(),
        (None, None) if method.uses_shape() => TuningGrid::default_s_values(data.n()),
        (None, None) => vec![default_shape(data.n())],
    };
    let grid = TuningGrid::new(lambda_grid(&a.grid), s_values)?;
    let template = solver_template(&a.solver, grid.s_values()[0])?;
    let crit = criterion(a.criterion, &a.grid);
    let outcome = tune_method(method, &data, &grid, crit, &template)?;

    let table = csv_bytes(|buf| report::write_tune_table(buf, &outcome.table, method.uses_shape()))?;
    out.emit(&table, a.out.as_deref(), "tune.csv", stdout)?;

    let mut rep = fit_report(method, &data, outcome.best, &template)?;
    let row = &outcome.table[outcome.best_index];
    rep.tuning = Some(TuningInfo {
        criterion: crit.name(),
        score: row.score.is_finite().then_some(row.score),
        grid_points: outcome.table.len(),
    });
    match out.resolve(a.best_out.as_deref(), "tune_best.json") {
        Some(path) => out.emit(rep.to_json()?.as_bytes(), Some(&path), "tune_best.json", stdout)?,
        None => {
            let _ = writeln!(
                stderr,
                "selected lambda={} s={} ({}={})",
                outcome.best.lambda,
                rep.params.s.map_or("NA".to_string(), |s| s.to_string()),
                crit.name(),
                row.score
            );
        }
    }
    let failed = outcome.table.iter().filter(|r| !r.converged).count();
    if failed > 0 {
        let _ = writeln!(stderr, "warning: {failed} grid points did not converge");
        if a.strict {
            return Err(Failure::Compute(format!("{failed} grid points did not converge")));
        }
    }
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs, out: &Output, stdout: &mut dyn Write) -> CmdResult {
    let methods = a
        .methods
        .iter()
        .map(|m| SimMethod::parse(m.trim()))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut spec = ScenarioSpec::new(ScenarioId::from_number(a.scenario)?, a.seed);
    spec.replicates = a.replicates;
    spec.n_total = a.n_total;
    spec.n_train = a.n_train;
    let mut cfg = SimulationConfig::new(spec);
    cfg.methods = methods;
    cfg.folds = a.folds;
    if let Some(l) = &a.lambdas {
        cfg.lambdas = l.clone();
    }
    cfg.s_values = a.s_values.clone();
    let rows = run_simulation(&cfg)?;
    let bytes = csv_bytes(|buf| report::write_sim_rows(buf, &rows))?;
    out.emit(&bytes, a.out.as_deref(), "simulate.csv", stdout)
}

fn cmd_curve(a: &CurveArgs, out: &Output, stdout: &mut dyn Write) -> CmdResult {
    let params = PenaltyParams::new(a.s, a.lambda)?;
    let curve = threshold_curve(params, a.ymin, a.ymax, a.step)?;
    let bytes = csv_bytes(|buf| report::write_pairs(buf, ["y", "estimate"], &curve))?;
    out.emit(&bytes, a.out.as_deref(), "threshold_curve.csv", stdout)
}

/// Grid points `lo, lo + step, ...` up to `hi`.
pub fn grid(lo: f64, hi: f64, step: f64) -> crate::Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite() && lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::Parameter(format!("invalid grid [{lo}, {hi}] step {step}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Largest |kernel erf - reference erf| over `xs`.
pub fn kernel_max_error(kernel: ErfKernel, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| (kernel.erf(x) - erf(x)).abs()).fold(0.0, f64::max)
}

fn cmd_bench(a: &BenchArgs, out: &Output, stdout: &mut dyn Write) -> CmdResult {
    let xs = grid(a.xmin, a.xmax, a.step)?;
    if a.repeats == 0 {
        return Err(usage("--repeats must be >= 1"));
    }
    let rows: Vec<BenchRow> = ErfKernel::ALL
        .iter()
        .map(|&k| {
            let ns = if a.no_timing {
                f64::NAN
            } else {
                let start = Instant::now();
                let mut acc = 0.0;
                for _ in 0..a.repeats {
                    for &x in &xs {
                        acc += k.erf(std::hint::black_box(x));
                    }
                }
                std::hint::black_box(acc);
                start.elapsed().as_nanos() as f64 / (a.repeats * xs.len()) as f64
            };
            BenchRow {
                kernel: k.name().to_string(),
                grid_max_abs_error: kernel_max_error(k, &xs),
                mean_ns_per_call: ns,
            }
        })
        .collect();
    let bytes = csv_bytes(|buf| report::write_bench(buf, &rows))?;
    out.emit(&bytes, a.out.as_deref(), "bench_erf.csv", stdout)
}

fn cmd_abs(a: &AbsArgs, out: &Output, stdout: &mut dyn Write) -> CmdResult {
    PenaltyParams::new(a.s, 0.0)?;
    let xs = grid(a.xmin, a.xmax, a.step)?;
    let rows = xs
        .iter()
        .map(|&x| {
            Ok(vec![
                x,
                x.abs(),
                smooth_abs(SmoothAbsKind::Dlasso, x, a.s)?,
                smooth_abs(SmoothAbsKind::SqrtShift, x, a.s)?,
                sqrt_lower_bound(x, a.s)?,
                smooth_abs(SmoothAbsKind::LogExp, x, a.s)?,
            ])
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let header = ["x", "abs", "dlasso", "sqrt_shift", "sqrt_lower", "log_exp"];
    let bytes = csv_bytes(|buf| report::write_columns(buf, &header, &rows))?;
    out.emit(&bytes, a.out.as_deref(), "abs_approx.csv", stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("dlasso").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn help_and_unknown_flags() {
        assert_eq!(run_str(&["--help"]).0, 0);
        assert_eq!(run_str(&["fit", "--bogus"]).0, 1);
        assert_eq!(run_str(&[]).0, 1);
    }

    #[test]
    fn threshold_curve_to_stdout() {
        let (code, out, _) = run_str(&["threshold-curve", "--lambda", "1", "--s", "0.01", "--ymin", "-1", "--ymax", "1", "--step", "0.5"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "y,estimate");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn bad_parameter_is_usage_error() {
        assert_eq!(run_str(&["threshold-curve", "--lambda", "1", "--s", "0"]).0, 1);
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(-1.0, 1.0, 0.5).unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(grid(1.0, 0.0, 0.1).is_err());
    }
}
