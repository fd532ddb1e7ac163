use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("empty series")]
    EmptySeries,

    #[error("invalid {name}: {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("power map with lambda = {lambda}, c = {c} is not invertible")]
    NotInvertible { lambda: f64, c: f64 },

    #[error("lag {lag} out of range for series of length {n}")]
    LagOutOfRange { lag: usize, n: usize },

    #[error("degenerate series: {0}")]
    Degenerate(&'static str),

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("run cancelled")]
    Cancelled,
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn with_context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
