use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex name `{0}`")]
    InvalidVertexName(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("graphs with {0} vertices are not supported (max 64)")]
    TooManyVertices(usize),
    #[error("vertex set is not a subset of the graph")]
    NotASubset,
    #[error("operation needs a nonempty graph")]
    EmptyGraph,
    #[error("elements belong to different groups")]
    GraphMismatch,
    #[error("enumeration budget of {limit} elements exceeded")]
    BudgetExceeded { limit: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("series coefficient is not an integer at degree {0}")]
    NonIntegralSeries(usize),
    #[error("growth estimate disagrees with the graph criterion: {0}")]
    GrowthDisagreement(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
