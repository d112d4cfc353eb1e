use alloc::string::String;

use crate::Q;

/// Errors raised by the arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("{0} does not define a quadratic field")]
    NotAField(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{what} is outside the supported domain: {value}")]
    OutOfDomain { what: &'static str, value: i64 },
    #[error("{what} evaluated to the non-integral value {value}")]
    NonIntegral { what: &'static str, value: Q },
    #[error("lattices belong to different orders")]
    OrderMismatch,
    #[error("lattice is not a proper ideal of its order")]
    NotProperIdeal,
    #[error("generators do not span a full-rank lattice")]
    Degenerate,
    #[error("halving identity failed for p = {p}, j = {j}")]
    HalvingFailure { p: u64, j: u8 },
    #[error("cannot evaluate: {0}")]
    Unevaluable(String),
}

pub type Result<T> = core::result::Result<T, Error>;
