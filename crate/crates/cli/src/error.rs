use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] fanoise_core::Error),
}

impl CliError {
    /// 1 usage or configuration, 2 validation failure, 3 I/O or parse.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) if e.is_io() => 3,
            CliError::Core(_) => 1,
        }
    }
}
