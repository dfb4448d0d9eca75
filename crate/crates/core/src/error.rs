use thiserror::Error;

use crate::quadrature::QuadratureError;

/// Errors raised by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A hyperparameter or argument lies outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called with arguments violating its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The operation is not defined for the given family or estimator.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A value lies outside the support required by the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A user-supplied density returned a negative or non-finite value.
    #[error("invalid density: {0}")]
    InvalidDensity(String),

    /// A loss function failed the numerical convexity/monotonicity falsifier.
    #[error("invalid loss function: {0}")]
    InvalidLoss(String),

    /// The normalizing integral of a coefficient curve vanished.
    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, Error>;
