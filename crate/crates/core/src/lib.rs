//! Chip-firing, gonality and scramble tooling for chess graphs.

pub mod board;
pub mod cache;
pub mod chipfiring;
pub mod constructions;
pub mod error;
pub mod flow;
pub mod formats;
pub mod graph;
pub mod invariants;
pub mod reproduce;
pub mod scramble;
pub mod search;
pub mod treecut;
pub mod vertex_set;

pub use board::{generate, BoardSpec, Piece};
pub use chipfiring::Divisor;
pub use error::{Error, Result};
pub use graph::{Coord, Edge, Graph, Vertex};
pub use vertex_set::VertexSet;
