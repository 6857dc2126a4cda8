use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {constraint} (got {value})")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("invalid state (n={n}, h={h}): {reason}")]
    InvalidState { n: u64, h: f64, reason: &'static str },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("event ceiling of {ceiling} events exceeded")]
    EventCeiling { ceiling: u64 },

    #[error("replica {index} failed: {source}")]
    Replica {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("no compact drift set inside the grid; offending points (n, h, AL+gL): {offending:?}")]
    DriftNoCompactSet { offending: Vec<(u64, f64, f64)> },

    #[error("drift tail check failed: {0}")]
    DriftTail(String),

    #[error("config error for key `{key}`: {constraint}")]
    Config { key: String, constraint: String },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::InvalidState { .. }
            | Error::InvalidArgument { .. }
            | Error::Config { .. } => 2,
            Error::EventCeiling { .. } => 3,
            Error::Replica { source, .. } => source.exit_code(),
            Error::DriftNoCompactSet { .. } | Error::DriftTail(_) | Error::Inconclusive(_) => 4,
            Error::ShapeMismatch(_) | Error::Serde(_) | Error::Io(_) => 1,
        }
    }
}
