//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building grids, solving, or factorizing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments, inconsistent dimensions, degenerate boundary data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A document could not be parsed or fails its schema.
    #[error("malformed document: {0}")]
    Format(String),

    /// The inner linear solve stalled. Carries the residual history.
    #[error("linear solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    LinearSolve {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    /// Continuation failure: the t-step underflowed or Newton stalled.
    #[error("continuation did not converge: {message}")]
    NonConvergence {
        message: String,
        report: Option<Box<crate::solver::SolveReport>>,
    },

    /// Frame integration blew up (singular frame, point left the chart).
    #[error("frame integration failure: {0}")]
    Integration(String),

    /// The input metric is not flat enough for a path-independent frame.
    #[error("metric is not flat: holomorphy defect {defect:.3e} exceeds {tol:.3e}")]
    NotFlat { defect: f64, tol: f64 },

    /// The monodromy came back measurably non-unitary.
    #[error("monodromy unitarity defect {defect:.3e} exceeds {tol:.3e}")]
    MonodromyDefect { defect: f64, tol: f64 },

    /// An eigenphase of the monodromy sits on the log branch cut.
    #[error("monodromy eigenphase {phase:.8} is within {guard:.1e} of \u{03c0}; principal branch is ambiguous")]
    BranchAmbiguity { phase: f64, guard: f64 },

    /// A verification check failed (flatness, periodicity, reconstruction).
    #[error("verification failure: {0}")]
    Verification(String),

    /// Filesystem error while reading or writing documents.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
