//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An input value violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A deformation gradient was singular or orientation-reversing.
    #[error("degenerate deformation gradient: det(F) = {det}")]
    DegenerateDeformation { det: f64 },

    /// A least-squares fit could not be solved.
    #[error("fit failed: {0}")]
    FitFailed(String),

    /// Mesh generation or validation failed.
    #[error("mesh error: {0}")]
    Mesh(String),

    /// The nonlinear solver did not converge.
    #[error("solver failed at step {step}: {detail} (last residual {residual:.3e})")]
    NonConvergence {
        step: usize,
        detail: String,
        residual: f64,
    },

    /// Contact attribution could not be resolved.
    #[error("contact attribution error: {0}")]
    Attribution(String),

    /// A query fell outside the calibrated range of a correspondence map.
    #[error("out of calibrated range: {0}")]
    OutOfRange(String),

    /// File format violation while reading or writing an artifact.
    #[error("format error: {0}")]
    Format(String),

    /// Graph search found no path to the goal.
    #[error("no path to goal")]
    NoPath,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
