use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("element {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("{factor} is not a unit modulo {modulus}")]
    NotUnit { factor: u64, modulus: u64 },

    #[error("shift list is invalid: {0}")]
    InvalidShifts(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty set")]
    EmptySet,

    #[error("zero function")]
    ZeroFunction,

    #[error("search budget of {budget} nodes exceeded at p = {p}")]
    BudgetExceeded { p: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
