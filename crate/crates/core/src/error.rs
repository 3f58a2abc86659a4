use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: {outcomes} outcomes requested, limit is {limit}")]
    Capacity { outcomes: u128, limit: u128 },

    #[error("no coalescence after {runs} runs (earliest start time {start})")]
    NonCoalescence { runs: usize, start: i64 },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
