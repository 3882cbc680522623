use thiserror::Error;

/// Errors produced anywhere in the simulation stack.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid waveform spec: {0}")]
    InvalidSpec(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SimError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_)
            | SimError::InvalidSpec(_)
            | SimError::InvalidInput(_)
            | SimError::InvalidGeometry(_)
            | SimError::InvalidDimension(_)
            | SimError::TooLarge(_) => 2,
            SimError::NumericFailure(_) => 3,
            SimError::Io(_) | SimError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
