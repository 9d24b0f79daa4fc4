use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(String, String),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("intersection form is not negative definite (witness {witness})")]
    NotNegativeDefinite { witness: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("not an element of the dual lattice: {0}")]
    NotInDualLattice(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty search region")]
    EmptyRegion,
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("resource bound exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
