use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop on node {node} (edge {edge})")]
    SelfLoop { edge: usize, node: usize },
    #[error("duplicate edge ({a}, {b})")]
    DuplicateEdge { a: usize, b: usize },
    #[error("edge {edge}: endpoint {endpoint} out of range for {node_count} nodes")]
    EndpointOutOfRange { edge: usize, endpoint: usize, node_count: usize },
    #[error("ragged node features: node {node} has dimension {found}, expected {expected}")]
    RaggedNodeFeatures { node: usize, expected: usize, found: usize },
    #[error("ragged edge features: edge {edge} has dimension {found}, expected {expected}")]
    RaggedEdgeFeatures { edge: usize, expected: usize, found: usize },
    #[error("expected {expected} node feature vectors, found {found}")]
    NodeFeatureCount { expected: usize, found: usize },
    #[error("expected {expected} edge feature vectors, found {found}")]
    EdgeFeatureCount { expected: usize, found: usize },
    #[error("non-finite feature value {0}")]
    NonFinite(f64),
    #[error("permutation has length {found}, graph has {expected} nodes")]
    PermutationLength { expected: usize, found: usize },
    #[error("mapping is not a bijection")]
    NotBijective,
    #[error("graph already has node features of dimension {0}")]
    HasNodeFeatures(usize),
    #[error("node degree {degree} exceeds one-hot width for max degree {max_degree}")]
    DegreeExceedsWidth { degree: usize, max_degree: usize },
    #[error("feature dimensions differ: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
}

#[derive(Debug, Error)]
pub enum TuError {
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{file} has {found} lines, expected {expected}")]
    LineCount { file: String, expected: usize, found: usize },
    #[error("graph indicator is not contiguous at node {node}: graph id {id} follows {prev}")]
    NonContiguousIndicator { node: usize, prev: usize, id: usize },
    #[error("edge ({a}, {b}) crosses graphs {ga} and {gb}")]
    CrossGraphEdge { a: usize, b: usize, ga: usize, gb: usize },
    #[error("edge ({a}, {b}) has label {forward} in one direction and {backward} in the other")]
    ConflictingEdgeLabels { a: usize, b: usize, forward: i64, backward: i64 },
    #[error("dataset contains no graphs")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WlError {
    #[error("graph {index} has feature dims {found:?}, expected {expected:?}")]
    DimensionMismatch { index: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("signatures come from different refinement sessions")]
    SessionMismatch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsoError {
    #[error("graph with {nodes} nodes exceeds the oracle limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("cross update needs non-empty vectors")]
    EmptyCross,
    #[error("{0}")]
    Config(String),
    #[error("forward cache does not match model")]
    CacheMismatch,
    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("class {class} has {count} members, fewer than k = {k}")]
    ClassTooSmall { class: usize, count: usize, k: usize },
    #[error("k must be at least 2, got {0}")]
    BadK(usize),
    #[error("empty training set")]
    EmptyTrainSet,
    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Wl(#[from] WlError),
}
