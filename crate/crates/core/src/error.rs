use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{param} = {value} is outside {min}..={max}")]
    OutOfRange {
        param: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },
    #[error("{what} = {got} exceeds cap {cap}")]
    CapExceeded { what: &'static str, got: u128, cap: u128 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

pub(crate) fn check_range(param: &'static str, value: u64, min: u64, max: u64) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            param,
            value,
            min,
            max,
        });
    }
    Ok(())
}

pub(crate) fn check_cap(what: &'static str, got: u128, cap: u128) -> Result<()> {
    if got > cap {
        return Err(Error::CapExceeded { what, got, cap });
    }
    Ok(())
}
