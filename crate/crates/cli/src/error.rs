use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] pim_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub type Result<T> = std::result::Result<T, CliError>;
