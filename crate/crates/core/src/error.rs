use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unsupported boundary: {0}")]
    UnsupportedBoundary(String),
    #[error("fermi level {fermi} lies on the spectrum (eigenvalue {eigenvalue})")]
    FermiLevelOnSpectrum { fermi: f64, eigenvalue: f64 },
    #[error("operator is not chiral (deviation {deviation:.3e})")]
    NotChiral { deviation: f64 },
    #[error("wrong parity: {what} requires {expected} dimension, got d = {dim}")]
    WrongParity {
        what: &'static str,
        expected: &'static str,
        dim: usize,
    },
    #[error("operator is not invertible (smallest singular value {smallest:.3e})")]
    NotInvertible { smallest: f64 },
    #[error("gapless: {0}")]
    Gapless(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
