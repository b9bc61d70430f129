//! Error types shared across the crate.

use crate::group::Partition;

/// Errors produced by decompositions, distance computations, and curve
/// construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SrError {
    /// Structurally malformed input: wrong dimension, non-finite entries,
    /// mismatched sizes, or parameters outside their documented range.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input outside the mathematical domain of the operation, e.g. a
    /// matrix that is not positive-definite where one is required.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation that requires distinct eigenvalues was given a matrix
    /// with repeated ones. Carries the eigenvalue partition so callers can
    /// report which entries coincide.
    #[error("repeated eigenvalues (blocks {partition}): {context}")]
    Multiplicity {
        partition: Partition,
        context: String,
    },

    /// Iterative maximization stopped at the iteration cap without meeting
    /// the convergence threshold. Carries the last iterate.
    #[error(
        "no convergence after {iterations} iterations \
         (theta={theta}, phi={phi}, objective={value})"
    )]
    Convergence {
        iterations: usize,
        theta: f64,
        phi: f64,
        value: f64,
    },

    /// The principal axis of a tensor is not unique because its top
    /// eigenvalue is repeated, so no axis-based rotation angle exists.
    #[error("principal axis is not unique (repeated top eigenvalue)")]
    AmbiguousAxis,
}

/// Convenience alias used throughout the crate.
pub type SrResult<T> = Result<T, SrError>;

impl SrError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SrError::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SrError::Domain(msg.into())
    }
}
