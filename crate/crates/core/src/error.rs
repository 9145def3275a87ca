use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is outside its supported range.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with inconsistent shapes or out-of-range indices.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("SMILES parse error at position {position}: {message}")]
    Smiles { position: usize, message: String },

    /// Malformed line-oriented input (CSV rows, circuit text).
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("{path}: {cause}")]
    Io { path: String, cause: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), cause: source }
    }
}

macro_rules! usage {
    ($($arg:tt)*) => { $crate::error::Error::Usage(format!($($arg)*)) };
}

macro_rules! config_err {
    ($($arg:tt)*) => { $crate::error::Error::Config(format!($($arg)*)) };
}

pub(crate) use {config_err, usage};
