use thiserror::Error;

/// Errors raised by constructors and pipelines. Failed mathematical identities are
/// not errors; they are reported through [`crate::report::Report`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic 2 is not supported: the idempotents eps^± divide by 2")]
    CharacteristicTwo,
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is too large")]
    ModulusTooLarge(u32),
    #[error("n = {n} is outside the supported range 1..={max} for {what}")]
    SizeOutOfRange { n: usize, max: usize, what: &'static str },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid canonical data: {0}")]
    InvalidLabel(String),
    #[error("operation not supported for monoid kind {0}")]
    UnsupportedKind(String),
    #[error("trace-form radical needs p > dim(A); got p = {p}, dim = {dim}")]
    TraceFormUnsound { p: u32, dim: usize },
    #[error("structure mismatch: {0}")]
    Structure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
