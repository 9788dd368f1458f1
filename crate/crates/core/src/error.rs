use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of a numeric kernel (NaN, infinity).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid penalty or configuration parameter.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("shape mismatch: {what} (expected {expected}, got {got})")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("linear system is not positive definite at iteration {iteration}")]
    Singular { iteration: usize },

    #[error("GCV undefined: effective degrees of freedom {df_trace} >= n = {n}")]
    GcvUndefined { df_trace: f64, n: usize },

    #[error("tuning failed: {0}")]
    Tuning(String),

    /// Malformed or unusable input data.
    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
