use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is not in a graph with {count} vertices")]
    UnknownVertex { vertex: Vertex, count: usize },

    #[error("edge {{{0}, {0}}} is a loop")]
    Loop(Vertex),

    #[error("vertex set is empty")]
    EmptySet,

    #[error("vertex sets overlap, so no edge cut can separate them")]
    NotSeparable,

    #[error("divisor has {got} entries but the graph has {expected} vertices")]
    DivisorLength { expected: usize, got: usize },

    #[error("divisor is not effective (vertex {0} is in debt)")]
    NotEffective(Vertex),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not simple")]
    NotSimple,

    #[error("vertex {0} is isolated")]
    IsolatedVertex(Vertex),

    #[error("tree-cut decomposition is invalid: {0}")]
    InvalidDecomposition(String),

    #[error("scramble is invalid: {0}")]
    InvalidScramble(String),

    #[error("no pair of vertex-disjoint eggs exists")]
    NoSeparablePair,

    #[error("square ({row}, {col}) is not on a {rows}x{cols} board")]
    OffBoard { row: i64, col: i64, rows: usize, cols: usize },

    #[error("expected rows <= cols, got {rows}x{cols}; transpose the board")]
    Orientation { rows: usize, cols: usize },

    #[error("{0}")]
    Domain(String),

    #[error("unknown catalogue entry `{0}`")]
    UnknownName(String),

    #[error("toroidal bishop's graph on a {0}x{1} board is connected")]
    SingleComponent(usize, usize),

    #[error("diagonal colours are only defined when both board sides are even")]
    ColourUndefined,

    #[error("firing loop exceeded {0} steps")]
    IterationCap(u64),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
