//! Equitable colorings of K4-minor-free graphs.
//!
//! Graphs are decomposed into SP-decomposition trees, normalized, and then
//! colored by a recursive reduce-and-extend procedure: find a small
//! two-terminal piece, rewrite it into a smaller graph, color that graph
//! equitably, and extend the coloring back over the piece with a fixed color
//! multiset. Every `k >= ceil((Δ + 3) / 2)` is supported.

pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod solver;
pub mod sp_tree;

pub use error::{Error, Result};
pub use graph::{is_equitable, Color, ColorProfile, Coloring, Graph, Vertex};
pub use solver::{equitable_color, min_colors, solve, Solution};
pub use sp_tree::{decompose, normalize, GadgetKind, SpNode, SpTree};
