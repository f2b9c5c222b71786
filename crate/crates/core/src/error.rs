use thiserror::Error;

use crate::quadrature::QuadError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("optimization failed: {0}")]
    Optimization(String),

    #[error("{0} vanishes; the ratio is undefined")]
    DivisionByZero(&'static str),

    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
