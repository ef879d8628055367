use thiserror::Error;

/// Runner failures, bucketed by exit code: config 2, data 3, capacity 4.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("capacity error: {0}")]
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Capacity(_) => 4,
        }
    }
}

impl From<qbias_core::Error> for CliError {
    fn from(err: qbias_core::Error) -> Self {
        use qbias_core::Error as E;
        match err {
            E::Capacity { .. } => CliError::Capacity(err.to_string()),
            E::Io { .. }
            | E::IdxMagic { .. }
            | E::IdxLength { .. }
            | E::InsufficientClass { .. }
            | E::EmptyDataset
            | E::BadLabel { .. } => CliError::Data(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}
