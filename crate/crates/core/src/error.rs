use alloc::string::String;

/// Errors raised by the simulation and optimization routines.
///
/// Invalid layouts are *not* errors: overlap and timeout are scored through
/// penalties so that optimizers can learn to avoid them.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input out of domain: {0}")]
    InputDomain(String),

    #[error("target at {distance:.4} m is beyond the arm's reach of {reach:.4} m")]
    Unreachable { distance: f64, reach: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain_err {
    ($($arg:tt)*) => {
        $crate::error::Error::InputDomain(alloc::format!($($arg)*))
    };
}

macro_rules! config_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Config(alloc::format!($($arg)*))
    };
}

pub(crate) use config_err;
pub(crate) use domain_err;
