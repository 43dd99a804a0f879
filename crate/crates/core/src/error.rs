use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input rejected at an API boundary (bad norm, non-unitary operator, malformed label).
    #[error("validation error: {0}")]
    Validation(String),

    /// Two routes that must agree did not; points at a convention bug upstream.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// A recipe expectation failed.
    #[error("verification failed at step {step}: {quantity}: {detail}")]
    Verification {
        step: usize,
        quantity: String,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
