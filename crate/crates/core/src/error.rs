use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("duplicate variable {0}")]
    DuplicateVariable(String),

    #[error("invalid weight for variable {0}")]
    BadWeight(String),

    #[error("term is not divisible by the monomial")]
    NotDivisible,

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("time budget exhausted")]
    Interrupted,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
