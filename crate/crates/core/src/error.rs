use thiserror::Error;

/// Errors raised by code construction, decoding and the simulation harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid field order, code parameters or decoder preconditions.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Operation outside the domain of a field function (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("insufficient symbols: need {needed}, have {known}")]
    InsufficientSymbols { needed: usize, known: usize },

    /// Received values that cannot come from a single codeword.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
