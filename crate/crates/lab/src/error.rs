use thiserror::Error;

/// Failures surfaced by the lab, each mapped to a CLI exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] enp_core::Error),
}

impl LabError {
    /// CLI exit code: 1 for configuration problems, 2 for numeric ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 1,
            LabError::Core(e) if is_config_error(e) => 1,
            _ => 2,
        }
    }
}

fn is_config_error(e: &enp_core::Error) -> bool {
    use enp_core::Error as E;
    matches!(e, E::Config(_) | E::Parameter(_) | E::Resolution { .. })
}

pub type LabResult<T> = Result<T, LabError>;
