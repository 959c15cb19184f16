use alloc::string::String;

/// Errors raised by the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point ({u1}, {u2}) lies outside the chart domain")]
    OutsideDomain { u1: f64, u2: f64 },
    #[error("kernel evaluated at a singular argument: {0}")]
    Singular(&'static str),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("metric is not positive definite at ({u1}, {u2})")]
    NotPositiveDefinite { u1: f64, u2: f64 },
    #[error("configuration: {0}")]
    Config(String),
    #[error("resolution {n} is below the minimum {min}")]
    Resolution { n: usize, min: usize },
    #[error("precondition violated: {0}")]
    Domain(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
