use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: String, source: std::io::Error },

    #[error("cannot parse config: {0}")]
    ParseConfig(#[from] serde_json::Error),

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] charevo::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 when a numerical accuracy limit was hit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(charevo::Error::CutoffTooSmall { .. } | charevo::Error::QuadratureOrder { .. }) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
