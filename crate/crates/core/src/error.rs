use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("transition enumeration needs {stochastic} stochastic cells, cap is {cap}: too large to enumerate")]
    TooLargeToEnumerate { stochastic: usize, cap: usize },

    #[error("MPS line {line}: {message}")]
    Mps { line: usize, message: String },

    #[error("scenario parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }
}
