use thiserror::Error;

use crate::fcidump::FcidumpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Fcidump(#[from] FcidumpError),

    #[error("index {index} out of range for {len} {what}")]
    OutOfBounds {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("imaginary coefficient {imag:e} on Pauli term {term}")]
    ComplexCoefficient { term: String, imag: f64 },

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         (best estimate {estimate}, residual {residual:e})"
    )]
    NotConverged {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
