use bgumbel_core::BgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("{path}, line {line}: cannot parse {text:?} as a number")]
    Parse { path: String, line: usize, text: String },

    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },

    #[error(transparent)]
    Numeric(#[from] BgError),
}

impl CliError {
    /// 2 for usage and input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(BgError::InvalidParams(_) | BgError::Regime(_)) => 2,
            CliError::Numeric(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
