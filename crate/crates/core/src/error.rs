use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("weight 0 has no finite generator valuation")]
    ZeroWeight,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),
    #[error("precision {precision} too large for p = {prime} (p^N must stay below 2^63)")]
    PrecisionTooLarge { prime: u64, precision: u32 },
    #[error("precision exhausted at N = {0}")]
    PrecisionExhausted(u32),
    #[error("maps do not compose to zero")]
    NotAComplex,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("problem too large for brute force: {0}")]
    TooLarge(String),
    #[error("result depends on out-of-window data: {0}")]
    Truncated(String),
    #[error("inconsistent table: {0}")]
    InconsistentTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("data error in {file}: {msg}")]
    Data { file: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
