use movbeam::BeamError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("hypothesis violated:\n{0}")]
    Hypothesis(String),
    #[error("diverged: {0}")]
    Divergence(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Divergence(_) => 4,
            CliError::Numeric(_) | CliError::Io(_) => 5,
        }
    }
}

impl From<BeamError> for CliError {
    fn from(e: BeamError) -> Self {
        let msg = e.to_string();
        match e.root() {
            BeamError::Config(_) => CliError::Config(msg),
            BeamError::InvalidBoundary { .. } | BeamError::SingularMapping { .. } => {
                CliError::Hypothesis(msg)
            }
            BeamError::Diverged(_) => CliError::Divergence(msg),
            _ => CliError::Numeric(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
