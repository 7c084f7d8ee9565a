//! Error types shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Shapes of two objects do not agree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not positive definite (pivot {pivot_index})")]
    NotPositiveDefinite { pivot_index: usize },

    /// Root finder was handed an interval without a sign change.
    #[error("no sign change over the root bracket")]
    NoBracket,

    /// An iterative routine ran out of iterations.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// Fewer data points than groups.
    #[error("too few points: {n} points for {groups} groups")]
    TooFewPoints { n: usize, groups: usize },

    /// A mixture component lost all of its effective mass.
    #[error("component {component} became degenerate")]
    DegenerateComponent { component: usize },

    /// Requested covariance structure has no implemented estimator.
    #[error("covariance structure {0} is not supported for fitting")]
    Unsupported(String),

    /// Every restart of a fit failed; causes are listed per restart.
    #[error("all {} fit restarts failed; first cause: {}", .causes.len(), .causes.first().map(|(_, c)| c.as_str()).unwrap_or("none"))]
    FitFailed { causes: Vec<(usize, String)> },

    /// File input problem, with a line number when one is known.
    #[error("io error{}: {message}", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Io {
        message: String,
        line: Option<usize>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
