use thiserror::Error;

/// Errors raised by the library.
///
/// The variants line up with the CLI exit codes: parameter problems map to
/// `3`, size guards to `4`, failed checks to `2`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polynomial {modulus:#x} is not irreducible of degree {n}")]
    ReducibleModulus { n: u32, modulus: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(u32, u32),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("integrity failure in stage `{stage}`: {detail}")]
    Integrity { stage: &'static str, detail: String },

    #[error("malformed artifact file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
