use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is outside the supported range [{lo}, {hi}]")]
    OutOfRange { value: u64, lo: u64, hi: u64 },

    /// An exact transform could not guarantee an exact result.
    #[error("precision failure: {0}")]
    Precision(String),

    /// Least-squares design matrix was rank deficient or badly conditioned.
    #[error("fit failure: {0}")]
    Fit(String),

    /// A coefficient table is missing entries required by a computation.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn check_range(value: u64, lo: u64, hi: u64) -> Result<()> {
    if value < lo || value > hi {
        Err(Error::OutOfRange { value, lo, hi })
    } else {
        Ok(())
    }
}
