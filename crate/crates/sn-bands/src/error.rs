//! Error type shared across the crate.

use thiserror::Error;

use crate::likelihood::StartDiagnostic;

/// Errors produced by model evaluation, fitting, and interval construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("probability must satisfy {constraint}, got {p}")]
    InvalidProbability { p: f64, constraint: &'static str },

    #[error("{what} = {value} is outside the working domain [{lo}, {hi}]")]
    OutsideDomain {
        what: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("inversion target {target} is outside the attainable log-range [{lo}, {hi}]")]
    OutsideRange { target: f64, lo: f64, hi: f64 },

    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("parameter vector has {got} regression coefficients, the curve family needs {want}")]
    ParamLength { got: usize, want: usize },

    #[error("curve is not strictly decreasing over the working domain")]
    NotMonotone,

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset row {row}: {msg}")]
    BadRow { row: usize, msg: String },

    #[error("dataset has no failures; the scale parameter is not estimable")]
    NoFailures,

    #[error("optimization failed: {msg}")]
    Optimization { msg: String },

    #[error("fit did not converge on any start")]
    NotConverged { diagnostics: Vec<StartDiagnostic> },

    #[error("observed information matrix is singular or not positive definite")]
    SingularInformation,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid simulation design: {0}")]
    InvalidDesign(String),

    #[error("coverage study aborted: {failures} of {total} replicates failed to fit")]
    TooManyFitFailures { failures: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
