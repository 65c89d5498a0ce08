use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pole at q = {0}")]
    Pole(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("no representation for {0}")]
    NoRepresentation(String),
    #[error("ordering mismatch: {0}")]
    OrderingMismatch(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
