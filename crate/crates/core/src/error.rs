use thiserror::Error;

use crate::arith::Params;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parameter mismatch: {0} vs {1}")]
    ParamsMismatch(Params, Params),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("inconsistent rank-1 descent data: {0}")]
    InconsistentDescent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
