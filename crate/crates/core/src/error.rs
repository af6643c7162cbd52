use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A run configuration violates a documented bound.
    #[error("configuration error: {0}")]
    Config(String),

    /// The operation is not defined for the given pulse or model.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    /// A spectrum is too coarse for the requested analysis.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Eigen-decomposition of a degenerate effective Hamiltonian.
    #[error("degenerate eigensystem: {0}")]
    Degenerate(String),

    /// A scan point failed; carries the axis value that triggered it.
    #[error("scan point {axis_value} failed: {source}")]
    ScanPoint {
        axis_value: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
