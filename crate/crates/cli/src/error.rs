use amoeba_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("i/o: {0}")]
    Io(String),
    /// The run finished but something it checks did not hold, or a computation gave up.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
            CliError::Io(_) => EXIT_IO,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(m) => CliError::Usage(m),
            e if e.is_hypothesis() => CliError::Hypothesis(e.to_string()),
            e => CliError::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
