use thiserror::Error;

use crate::graph::{EdgeId, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("self-loop on node {0} rejected")]
    SelfLoopRejected(NodeId),
    #[error("edge weight {0} is not a finite non-negative number")]
    InvalidWeight(f64),
    #[error("node coordinates ({x}, {y}) are not finite")]
    NonFiniteCoordinate { x: f64, y: f64 },
    #[error("node coordinates ({x}, {y}) fall outside the {width}x{height} overlay")]
    OutOfBounds { x: f64, y: f64, width: u32, height: u32 },
    #[error("overlay dimensions must be positive, got {width}x{height}")]
    InvalidOverlay { width: u32, height: u32 },
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("malformed graph document: {0}")]
    Malformed(String),

    #[error("no path from {from} to {to}")]
    Unreachable { from: NodeId, to: NodeId },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("cannot pair an odd number ({0}) of nodes")]
    OddCardinality(usize),
    #[error("exact matching supports at most {max} nodes, got {got}")]
    CardinalityTooLarge { got: usize, max: usize },
    #[error("Euler circuit impossible: nodes {0:?} have odd degree")]
    OddDegreePresent(Vec<NodeId>),
    #[error("tour needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("exact tour supports at most {max} nodes, got {got}")]
    TooLarge { got: usize, max: usize },
    #[error("distance matrix is not a metric: {0}")]
    NotMetric(String),
    #[error("walk does not visit node {0}")]
    WalkMissesNode(NodeId),
}

impl Error {
    /// True for errors that describe a structurally invalid graph rather than
    /// an algorithm precondition.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::SelfLoopRejected(_)
                | Error::InvalidWeight(_)
                | Error::NonFiniteCoordinate { .. }
                | Error::OutOfBounds { .. }
                | Error::InvalidOverlay { .. }
                | Error::DuplicateNode(_)
                | Error::DuplicateEdge(_)
                | Error::Malformed(_)
        )
    }
}
