use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative duration {0} s")]
    NegativeTime(f64),

    #[error("potential {potential} V is not below threshold {threshold} V")]
    AtOrAboveThreshold { potential: f64, threshold: f64 },

    #[error("no neuron at or above threshold; the firing regime was entered without a spike")]
    NoSpontaneousSpike,

    #[error("bound refused: {0}")]
    BoundRefused(String),

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("sweep point {parameter} = {value}: {source}")]
    SweepPoint {
        parameter: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
