use std::path::PathBuf;

/// Errors produced by the generator, dataset tooling and statistics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("group map names missing group `{0}`")]
    Mapping(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("sampling error: requested {requested} of {available} records")]
    Sampling { requested: usize, available: usize },

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("frequency undefined for an empty manifest")]
    UndefinedFrequency,

    #[error("baseline mean is zero for r = {0}")]
    UndefinedBaseline(u64),

    #[error("relative CI width undefined for non-positive mean {0}")]
    UndefinedRelativeWidth(f64),

    #[error("manifest validation failed: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image encode/decode: {0}")]
    Image(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for failures caused by bad user data rather than bad invocation.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Parameter(_))
    }
}
