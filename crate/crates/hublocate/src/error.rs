use thiserror::Error;

/// Errors surfaced by instance construction, reductions and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("vector-space mid-points require coordinate geometry")]
    VectorModeNeedsCoordinates,

    #[error("{what} count {count} exceeds the enumeration limit {limit}")]
    EnumerationLimit {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("solver requires {0}")]
    SolverRequirement(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }
}
