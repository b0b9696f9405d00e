use thiserror::Error;

use crate::graph::{Edge, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a digraph needs at least one vertex")]
    ZeroVertices,
    #[error("vertex {vertex} is outside 1..={bound}")]
    VertexOutOfRange { vertex: u32, bound: u32 },
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("root {0} is not a vertex of the graph")]
    RootNotInGraph(Vertex),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("vertex {0} is already present")]
    VertexAlreadyPresent(Vertex),
    #[error("the graph is not structurally controllable w.r.t. the given roots")]
    NotControllable,
    #[error("the graph is not 2-edge controllable w.r.t. the given roots ({0} violating edges)")]
    NotResilient(usize),
    #[error("edge {0} is not critical")]
    NotCritical(Edge),
    #[error("k = {k} exceeds the brute-force bound {bound}")]
    KTooLarge { k: usize, bound: usize },
    #[error("critical-set size {size} exceeds the enumeration bound {bound}")]
    CriticalSetBound { size: usize, bound: usize },
    #[error("subgraph {index}: {reason}")]
    Subgraph { index: usize, reason: String },
    #[error("witness set {index} intersects the root set")]
    WitnessIntersectsRoots { index: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown builtin topology `{0}`")]
    UnknownBuiltin(String),
    #[error("internal error: {0}")]
    Internal(String),
}
