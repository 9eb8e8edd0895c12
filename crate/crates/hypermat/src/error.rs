//! Error types shared across the library.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix construction or combination with inconsistent shapes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Non-finite entry encountered where a finite matrix is required.
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    /// Eigenvalue or Schur computation failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A scalar function was applied outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The function is undefined at an eigenvalue of the argument.
    #[error("function {fn_name} undefined at eigenvalue {eigenvalue}")]
    UndefinedAtEigenvalue {
        fn_name: &'static str,
        eigenvalue: Complex64,
    },

    /// A confluent eigenvalue cluster was met without derivative data.
    #[error("confluent eigenvalue cluster near {center}: derivatives of the scalar function are required")]
    Confluence { center: Complex64 },

    /// A caller-side precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A denominator shift Q + mI is singular inside a series.
    #[error("denominator parameter singular at series index {index}")]
    SingularShift { index: usize },

    /// Quadrature failed to reach the requested tolerance.
    #[error("quadrature did not reach tolerance: last residual {residual:.3e} at {nodes} nodes")]
    Accuracy { residual: f64, nodes: usize },

    /// Random case generation could not satisfy the constraints.
    #[error("generation failed: {0}")]
    Generation(String),

    /// Malformed input document.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
