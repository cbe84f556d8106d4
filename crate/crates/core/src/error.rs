use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate half-edge {0}")]
    DuplicateHalfEdge(i64),
    #[error("α has fixed point: edge {edge} pairs half-edge {half} with itself")]
    FixedPoint { edge: i64, half: i64 },
    #[error("orphan half-edge {0}: {1}")]
    OrphanHalfEdge(i64, &'static str),
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: i64 },
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("edge {0} is a loop; contraction of loops is not defined")]
    LoopContraction(usize),
    #[error("invalid endpoint {endpoint} for edge {edge} in a graph with {vertices} vertices")]
    InvalidEndpoint {
        edge: usize,
        endpoint: usize,
        vertices: usize,
    },
    #[error("fatgraph has {edges} edges, above the cap of {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
    #[error("{count} rotation systems exceed the cap of {cap}")]
    TooManyRotationSystems { count: u128, cap: u128 },
    #[error("complex would have {count} generators, above the cap of {cap}")]
    TooManyGenerators { count: u128, cap: u128 },
    #[error("requires a genus-0 fatgraph, got genus {0}")]
    NonzeroGenus(usize),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("polynomial error: {0}")]
    Polynomial(String),
    #[error("factor mismatch: {0}")]
    FactorMismatch(String),
    #[error("cannot flip coordinate {0}: it is already set")]
    CoordinateSet(usize),
    #[error("d∘d ≠ 0 at index {index}: {detail}")]
    NotAComplex { index: i64, detail: String },
    #[error("differential is not homogeneous at index {index}: {detail}")]
    Inhomogeneous { index: i64, detail: String },
    #[error("grading arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("identity check failed: {0}")]
    IdentityMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
