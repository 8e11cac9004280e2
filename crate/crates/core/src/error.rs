use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RpmError {
    #[error("exponent {p}/{q} is outside the supported range alpha >= -1")]
    ExponentOutOfRange { p: i64, q: i64 },
    #[error("zero exponent: the potential vanishes")]
    ZeroExponent,
    #[error("zero denominator in exponent")]
    ZeroDenominator,
    #[error("sign {sigma} is inconsistent with alpha = {p}/{q}; sigma must equal sign(alpha)")]
    SignMismatch { p: i64, q: i64, sigma: i32 },
    #[error("parity compression requires q and p+q both odd")]
    NotParityOdd,
    #[error("table already parity-compressed")]
    AlreadyCompressed,
    #[error("coefficient table too short: need index {needed}, have up to {available}")]
    TableTooShort { needed: usize, available: usize },
    #[error("Hankel dimension must be at least 1")]
    EmptyHankel,
    #[error("exact determinant refused for D = {dim} (bound {max})")]
    ExactDimensionTooLarge { dim: usize, max: usize },
    #[error("invalid physical parameters: {0}")]
    InvalidUnits(String),
    #[error("precision exhausted at {bits} bits (D = {dim})")]
    PrecisionExhausted { dim: usize, bits: u32 },
    #[error("invalid search window [{lo}, {hi}]: {reason}")]
    InvalidWindow { lo: f64, hi: f64, reason: String },
    #[error("root sequence too short: {len} entries, need {min}")]
    SequenceTooShort { len: usize, min: usize },
    #[error("oracle: outer solution does not decay at eps = {eps}")]
    NonDecaying { eps: f64 },
    #[error("oracle: state nu = {nu} not found: {reason}")]
    StateNotFound { nu: u32, reason: String },
    #[error("oracle: integration failed: {0}")]
    Integration(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = RpmError> = std::result::Result<T, E>;
