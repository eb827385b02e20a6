use alloc::string::String;

/// Errors raised by the computation engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("incompatible quadratic extensions sqrt({0}) and sqrt({1})")]
    RadicalMismatch(u32, u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("truncation window too small: {0}")]
    Truncation(String),
    #[error("missing table entry: {0}")]
    MissingEntry(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
