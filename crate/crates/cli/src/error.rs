use cimmino_core::Error;
use thiserror::Error;

/// A failed command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Pole(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Singular(_) => 5,
            CliError::Io(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::TooCloseToPole { .. } | Error::PoleOfGamma(_) => CliError::Pole(msg),
            Error::SingularMatrix => CliError::Singular(msg),
            Error::NoConvergence
            | Error::TooManyPoints { .. }
            | Error::EvaluationFailure { .. }
            | Error::NonFiniteIntegrand
            | Error::DegenerateQuadrature
            | Error::CrossCheckFailed(_) => CliError::Verification(msg),
            _ => CliError::Validation(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
