use thiserror::Error;

use riccati_pade::RpmError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Rpm(#[from] RpmError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("golden data: {0}")]
    Golden(#[from] toml::de::Error),
    #[error("report holds no states")]
    EmptyReport,
    #[error("no table with id {0}")]
    UnknownTable(u8),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
