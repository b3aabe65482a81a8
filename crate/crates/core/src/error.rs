use std::io;

use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: probability {value} outside [0, 1]")]
    Probability { line: usize, value: f64 },

    #[error("self-loop on node {0}")]
    SelfLoop(u64),

    #[error("layer size mismatch: social layer has {social} nodes, ad-hoc layer has {adhoc}")]
    NodeCountMismatch { social: usize, adhoc: usize },

    #[error("invalid layer mapping: {0}")]
    Mapping(String),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("{0}")]
    Domain(String),

    #[error("social graph has edges without probabilities")]
    MissingProbabilities,

    #[error("nodes {0} and {1} are disconnected in the ad-hoc layer")]
    Unreachable(NodeId, NodeId),

    #[error("node {node} cannot use {agent} as its agent: {reason}")]
    InvalidCandidate {
        node: NodeId,
        agent: NodeId,
        reason: &'static str,
    },

    #[error("exhaustive search over {0} assignments exceeds the limit")]
    SearchSpace(u128),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
