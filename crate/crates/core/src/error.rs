use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KrlError {
    #[error("input error: {0}")]
    Input(String),
    #[error("folding error: {0}")]
    Folding(String),
    #[error("budget exceeded: {what} needs about {estimate}, cap is {cap}")]
    Budget { what: String, estimate: u64, cap: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, KrlError>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(KrlError::Input(msg.into()))
}
