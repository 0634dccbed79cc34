use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a power of {1}")]
    NotPrimePower(u64, u64),
    #[error("modulus must be positive and below 2^63, got {0}")]
    InvalidModulus(u128),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("{0} is not a unit modulo {1}")]
    NotUnit(u64, u64),
    #[error("matrix is not invertible modulo {0}")]
    NonInvertible(u64),
    #[error("group closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypotheses not satisfied: {0}")]
    HypothesesNotSatisfied(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
