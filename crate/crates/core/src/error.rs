use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("no counts recorded")]
    EmptyData,
    #[error("circuit validation failed: {0}")]
    Circuit(String),
    #[error("setting table: {0}")]
    Data(String),
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
