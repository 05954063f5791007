use thiserror::Error;

use crate::graph::EdgeId;
use crate::minor::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A set handed to a checked contraction is not connected in the current minor.
    #[error("set {0:?} is not connected in the minor")]
    DisconnectedSet(Vec<NodeId>),
    #[error("set {0:?} has even node weight")]
    EvenSet(Vec<NodeId>),
    #[error("contraction sets overlap at node {0}")]
    OverlappingSets(NodeId),
    #[error("node {0} does not exist in the minor")]
    UnknownNode(NodeId),
    #[error("input graph has no perfect matching")]
    NoPerfectMatchingInput,
    #[error("no vertex u yields a perfect matching of the allowed subgraph minus {{u, {0}}}")]
    NoWitness(NodeId),
    #[error("sets {0:?} and {1:?} cross")]
    NotLaminar(Vec<NodeId>, Vec<NodeId>),
    #[error("threshold component {0:?} has even node weight")]
    EvenComponentAtThreshold(Vec<NodeId>),
    #[error("no candidate minor reduces the non-isolated edge count below {0}")]
    NoProgress(usize),
    #[error("invalid even walk: {0}")]
    InvalidWalk(String),
    #[error("token count {0} is odd")]
    OddTokens(usize),
    #[error("input is not a tree: {0}")]
    NotATree(String),
    #[error("walk has zero circulation")]
    ZeroCirculation,
    #[error("no disallowed edge and no mismatched set found for a positive-circulation walk")]
    LemmaViolation,
    #[error("edge {edge} has weight {weight}, exceeding the cap {cap}")]
    WeightCap { edge: EdgeId, weight: i64, cap: i64 },
    #[error("weight vector has no entry for edge {0}")]
    MissingWeight(EdgeId),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("inconsistent state: {0}")]
    Inconsistent(String),
}
