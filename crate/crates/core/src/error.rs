use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative construction could not proceed at the given level.
    #[error("construction failed at level {level}: {reason}")]
    Construction { level: u32, reason: String },

    /// A requested depth exceeds the configured limit.
    #[error("depth {depth} exceeds limit {limit}")]
    DepthLimit { depth: u32, limit: u32 },

    /// Malformed textual input.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
