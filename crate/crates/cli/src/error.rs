use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment {0:?} (see `bslab list`)")]
    UnknownExperiment(String),

    #[error("unknown parameter {name:?} for experiment {experiment}")]
    UnknownParameter { experiment: String, name: String },

    #[error("parameter {name}: {reason}")]
    BadParameter { name: String, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Core(#[from] bslab_core::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn bad(name: &str, reason: impl Into<String>) -> CliError {
    CliError::BadParameter { name: name.to_string(), reason: reason.into() }
}

pub(crate) fn io_err(path: &std::path::Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), source }
}
