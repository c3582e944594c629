//! Crate-wide error type.

/// Errors surfaced by the library. CLI exit codes map `Config*` variants to 2
/// and `Data`/`Pairing` to 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image format error: {0}")]
    Format(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("dataset pairing error: orphan stems {0:?}")]
    Pairing(Vec<String>),

    #[error("config error: {0}")]
    Config(String),

    #[error("config mismatch: {0}")]
    ConfigMismatch(String),

    #[error("checkpoint integrity error: {0}")]
    Integrity(String),

    #[error("training fault: {0}")]
    Training(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
