use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FpBitsError {
    #[error("biased exponent {exponent} outside [0, {max}]")]
    ExponentOutOfRange { exponent: i64, max: u32 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SumError {
    #[error("recursion depth {depth} exceeds the level table size {limit}")]
    RecursionLimit { depth: usize, limit: usize },
    #[error("cannot merge a {left} table with a {right} table")]
    FormatMismatch {
        left: &'static str,
        right: &'static str,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("non-finite input {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error("term count must be at least 1")]
    EmptySeries,
    #[error("division by zero: y must be nonzero")]
    Domain,
    #[error("target ratio {ratio} is not achievable with {n} terms")]
    Unachievable { n: usize, ratio: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignError {
    #[error("non-finite input {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("no decision after {0} rounds")]
    IterationCap(u64),
    #[error(transparent)]
    Sum(#[from] SumError),
}
