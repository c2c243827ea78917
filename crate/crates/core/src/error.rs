//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;
use crate::state::NodeStatus;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {0} is out of range (graph has {1} nodes)")]
    NodeOutOfRange(NodeId, usize),

    #[error("node {0} is not a probe candidate (status {1:?})")]
    ProbeNotCandidate(NodeId, NodeStatus),

    #[error("candidate set is empty")]
    NoCandidates,

    #[error("node {0} has not been observed")]
    NodeNotObserved(NodeId),

    #[error("node {0} is not a candidate")]
    NodeNotCandidate(NodeId),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("graph generation failed: {0}")]
    GenerationFailed(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("edge list contains no edges")]
    EmptyGraph,

    #[error("sample fraction {0} is not in (0, 1]")]
    InvalidFraction(f64),

    #[error("probe history is empty")]
    EmptyHistory,

    #[error("Gram matrix is singular")]
    SingularGram,

    #[error("invalid config: {0}")]
    Config(String),

    #[error("cannot aggregate series with mixed config fingerprints ({0} vs {1})")]
    MixedConfigs(String, String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
