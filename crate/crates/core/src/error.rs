use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("edge {0} is not an edge of the triangulation")]
    UnknownEdge(usize),

    #[error("weight vector has {got} entries, triangulation has {expected} edges")]
    WeightLength { expected: usize, got: usize },

    #[error("invalid normal coordinates: {0}")]
    InvalidWeights(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("edge {0} cannot be flipped")]
    NotFlippable(usize),

    #[error("invalid mapping class: {0}")]
    InvalidMappingClass(String),

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("{count} curve images fall outside the target universe")]
    Partiality { count: usize, escapees: Vec<usize> },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
