use thiserror::Error;

use crate::graph::Arc;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arc probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(f64),

    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(f64),

    #[error("graph needs at least one node")]
    NoNodes,

    #[error("need at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },

    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("loop at node {0} is not allowed in a simple graph")]
    Loop(usize),

    #[error("arc {0} is not present in the graph")]
    ArcAbsent(Arc),

    #[error("directed arcs are antipodal (same arc, opposite orientation)")]
    Antipodal,

    #[error("directed arcs are identical")]
    IdenticalArcs,

    #[error("unsupported path length {0} (only 2 and 3 are supported)")]
    UnsupportedPathLength(usize),

    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no arcs")]
    EmptyGraph,

    #[error("duplicate vertex at index {0}")]
    DuplicateVertex(usize),

    #[error("vertex index {index} out of range ({len} vertices)")]
    VertexIndex { index: usize, len: usize },

    #[error("n = {n} exceeds the size guard {max}")]
    SizeGuard { n: usize, max: usize },

    #[error("an arc order is required for the triangulation model")]
    MissingOrder,

    #[error("arc order covers {expected} arcs but the graph has {found} potential arcs")]
    OrderSize { expected: usize, found: usize },

    #[error("rank sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("need at least {needed} replicates, got {got}")]
    TooFewReplicates { needed: usize, got: usize },

    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("sample variance is zero; cannot standardize")]
    ZeroVariance,

    #[error("degenerate variance estimate {0} for a non-constant functional")]
    DegenerateVariance(f64),

    #[error("parameter grid is empty")]
    EmptyGrid,
}
