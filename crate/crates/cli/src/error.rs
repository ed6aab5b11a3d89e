use nonlocal_spectra::Error as NumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("tolerance breach: {0}")]
    Breach(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Numerical(#[from] NumError),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl CliError {
    /// 1 config, 2 numerical tolerance, 3 violated theory precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Breach(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Numerical(e) => match e {
                NumError::InvalidParameter { .. }
                | NumError::PositivityViolation(_)
                | NumError::UnsupportedDimension(_) => 1,
                NumError::RecurrentResolvent
                | NumError::ContractionViolated { .. }
                | NumError::HullViolation { .. }
                | NumError::TiltOutOfRange { .. } => 3,
                _ => 2,
            },
        }
    }
}
