use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed arguments: dimension or length mismatches, empty sets, non-finite states.
    #[error("input error: {0}")]
    Input(String),

    /// The Gram factorization failed at every jitter level.
    #[error(
        "gram factorization failed after jitter {jitter:e}; closest centers {first} and {second} \
         are {separation:e} apart"
    )]
    Factorization {
        jitter: f64,
        first: usize,
        second: usize,
        separation: f64,
    },

    /// A trajectory produced a non-finite state.
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("insufficient data: {usable} usable records, need at least {required}")]
    InsufficientData { usable: usize, required: usize },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
