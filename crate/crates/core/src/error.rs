use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the codec, simulation, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A bit vector or LLR vector had the wrong length.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A bit value outside {0, 1} was supplied.
    #[error("invalid bit value {0}: bits must be 0 or 1")]
    InvalidBit(u8),

    /// A structural or numeric parameter was out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A CRC name not present in the registry was requested.
    #[error("unknown CRC `{0}`")]
    UnknownCrc(String),

    /// A CRC binding was required but missing, or present but unsupported.
    #[error("{0}")]
    CrcBinding(String),

    /// Text input (spec files, bit strings) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
