//! Crate-wide error type.
//!
//! Every variant names the subsystem it comes from so CLI consumers can emit a
//! structured message without string-matching.

use thiserror::Error;

/// Errors surfaced by the estimation library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid configuration value (loss scale, radius, level, ...).
    #[error("config: {0}")]
    Config(String),

    /// Dimension mismatch between vectors/matrices.
    #[error("shape: expected dimension {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    /// Malformed input file (missing header, ragged rows, unparsable field).
    #[error("data format: {0}")]
    Format(String),

    /// Structurally valid data with out-of-domain values (e.g. y not in {0,1}).
    #[error("data domain: {0}")]
    Domain(String),

    /// Dataset unusable for estimation (one-class, collinear, too few rows).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Optimizer hit the iteration cap; carries the last iterate for diagnosis.
    #[error("estimate: no convergence in {max_iter} iterations (grad norm {grad_norm:.3e})")]
    IterationLimit {
        max_iter: usize,
        grad_norm: f64,
        last_iterate: Vec<f64>,
    },

    /// Sample Hessian unusable for sandwich inversion.
    #[error("inference ill-conditioned: {reason} (condition number {cond:.3e})")]
    IllConditioned { reason: String, cond: f64 },

    /// Variance form a'Va came out non-positive.
    #[error("inference: degenerate variance {value:.3e} for the requested contrast")]
    DegenerateVariance { value: f64 },

    /// Too many bootstrap resamples had to be rejected.
    #[error("bootstrap unstable: {rejected} rejected resamples against {requested} requested")]
    BootstrapInstability { rejected: usize, requested: usize },

    /// Monte Carlo run exceeded the redraw budget.
    #[error("simulation: {redraws} replication redraws out of {reps} replications exceeds 1%")]
    ExperimentError { redraws: usize, reps: usize },

    /// I/O failure while reading or writing datasets/reports.
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
