use thiserror::Error;

/// Problems found while reading or validating a network.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("network has no `nodes` declaration")]
    MissingNodes,
    #[error("network needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("arc {arc}: node {node} is outside 1..={node_count}")]
    NodeOutOfRange {
        arc: usize,
        node: usize,
        node_count: usize,
    },
    #[error("arc {arc}: loop on node {node}")]
    Loop { arc: usize, node: usize },
    #[error("arc {arc}: parallel to arc {first} between nodes {u} and {v}")]
    ParallelArc {
        arc: usize,
        first: usize,
        u: usize,
        v: usize,
    },
    #[error("arc {arc}: probability {p} is not in [0, 1]")]
    ProbabilityOutOfRange { arc: usize, p: f64 },
    #[error("network is disconnected: node {node} cannot be reached from node 1")]
    Disconnected { node: usize },
}

/// Failures of the reliability engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("{what} needs {width} arc bits but the limit is {cap}")]
    WidthCapExceeded {
        what: &'static str,
        width: usize,
        cap: usize,
    },
    #[error("node {sink} is unreachable from the source set")]
    Unreachable { sink: usize },
    #[error("matrix dimensions do not chain: {left_cols} columns against {right_rows} rows")]
    DimensionMismatch { left_cols: usize, right_rows: usize },
    #[error("boundary of stage {stage} has {size} nodes, more than {cap}")]
    BoundaryTooWide {
        stage: usize,
        size: usize,
        cap: usize,
    },
    #[error("time budget exhausted")]
    Timeout,
    #[error("invalid generator: {0}")]
    Generator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
