use std::path::PathBuf;

use crate::domain::ImputationMode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("prediction must be finite, got {0}")]
    NonFinitePrediction(f64),

    #[error("invalid outcome label {0:?}, expected \"+1\" or \"-1\"")]
    InvalidOutcome(String),

    #[error("duplicate question id {0:?}")]
    DuplicateQuestion(String),

    #[error("duplicate forecaster id {0:?}")]
    DuplicateForecaster(String),

    #[error("identifier {0:?} contains a line break")]
    InvalidIdentifier(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("imputation mode `{0}` does not fill cells")]
    UnsupportedImputation(ImputationMode),

    #[error("unknown link {0:?}, expected `exponential` or `linear`")]
    UnknownLink(String),

    #[error("unknown method {0:?}, expected `bagging`, `adaboost` or `realboost`")]
    UnknownMethod(String),

    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("bin count must be at least 1")]
    ZeroBins,

    #[error("need at least {needed} questions, got {got}")]
    InsufficientQuestions { needed: usize, got: usize },

    #[error("invalid synthetic parameter: {0}")]
    InvalidSynthetic(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("question {0:?} has forecasts but no outcome row")]
    MissingOutcome(String),

}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl std::fmt::Display, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}
