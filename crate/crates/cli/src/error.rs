use ntr_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),

    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Data(String),

    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::InvalidParameter(_) => CliError::Config(msg),
            CoreError::EmptyDataset | CoreError::Parse { .. } | CoreError::Io(_) | CoreError::Csv(_) => {
                CliError::Data(msg)
            }
            CoreError::Quadrature(_)
            | CoreError::Numeric(_)
            | CoreError::Inversion { .. }
            | CoreError::Diagnostic(_) => CliError::Numeric(msg),
        }
    }
}
