use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge {edge}: weight {weight} is not strictly positive")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("edge {edge}: vertex {vertex} out of range (|V| = {num_vertices})")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("subgraph is not a spanning tree")]
    NotSpanningTree,
    #[error("forest contains a cycle")]
    ForestHasCycle,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("enumeration over {size} elements exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("rank-deficient family: expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("degenerate forms: {0}")]
    DegenerateForms(String),
    #[error("wrong cardinality: expected {expected}, found {found}")]
    WrongCardinality { expected: usize, found: usize },
    #[error("wrong first Betti number: expected {expected}, found {found}")]
    WrongBetti { expected: usize, found: usize },
    #[error("subgraph is not connected")]
    NotConnected,
    #[error("wrong number of components: expected {expected}, found {found}")]
    WrongComponentCount { expected: usize, found: usize },
    #[error("component with first Betti number {0} is not cycle-rooted")]
    ComponentBettiTooLarge(usize),
    #[error("subset is not a basis of the matroid")]
    NotABasis,
    #[error("conditioning event has probability zero")]
    ImpossibleCondition,
    #[error("vertex charge does not sum to zero (sum = {0})")]
    QNotBalanced(f64),
    #[error("matrix is not a projection: {0}")]
    NotAProjection(String),
    #[error("connection value on edge {0} does not have unit modulus")]
    NonUnitConnection(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by numerically degenerate data rather than
    /// malformed input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::DegenerateForms(_)
                | Error::ImpossibleCondition
                | Error::NotAProjection(_)
        )
    }
}
