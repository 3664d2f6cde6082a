use thiserror::Error;

use crate::graph::{Color, Vertex};

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    MissingVertex(Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("empty vertex set")]
    EmptySet,
    #[error("vertex {0} has no color")]
    PartialColoring(Vertex),
    #[error("color {0} outside 1..={1}")]
    ColorOutOfRange(Color, u32),
    #[error("graph has a K4 minor")]
    K4Minor,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error("malformed SP tree: {0}")]
    Structure(String),
    #[error("k = {k} is below the bound {bound} required for maximum degree {max_degree}")]
    KBelowBound { k: u32, bound: u32, max_degree: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
