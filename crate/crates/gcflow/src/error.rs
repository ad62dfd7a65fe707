//! Crate-wide error type.

use thiserror::Error;

/// Broad failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments or unusable configuration.
    Usage,
    /// Malformed or inconsistent data/files.
    Data,
    /// Numerical failure (divergence, singularity, non-finite values).
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {component}")]
    NonFinite { component: String },

    #[error("state norm exceeded blow-up bound {bound:e} at step {step}")]
    Divergence { step: usize, bound: f64 },

    #[error("splitting step not invertible: |F*tau| = {value} >= 1")]
    InvertibilityLoss { value: f64 },

    #[error("singular inverse: |1 - F*tau| = {value:e} below threshold")]
    SingularInverse { value: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("training diverged: loss {loss:e} above clip {clip:e} for {epochs} consecutive epochs")]
    TrainingFailure { epochs: usize, loss: f64, clip: f64 },

    #[error("action variable fell below floor {floor:e} at sample {index}")]
    SingularAction { index: usize, floor: f64 },

    #[error("density normalization drift {drift:e} above 1e-5; reduce the step size")]
    NormalizationDrift { drift: f64 },

    #[error("control solver failed: {0}")]
    SolverFailure(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("data format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Classify for CLI exit-code mapping.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) => ErrorClass::Usage,
            Error::ShapeMismatch(_)
            | Error::DimensionMismatch { .. }
            | Error::Format(_)
            | Error::Io(_)
            | Error::Json(_) => ErrorClass::Data,
            _ => ErrorClass::Numeric,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
