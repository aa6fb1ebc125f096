//! Stepwise structure learning for decomposable (chordal) graphical models
//! over categorical data.
//!
//! The model graph is kept chordal at every step. Its clique graph is
//! maintained incrementally so that the set of edges whose addition keeps
//! the graph chordal can be enumerated in `O(n^2)` per step, and candidate
//! moves are scored by closed-form entropy differences.

pub mod clique_graph;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod scoring;
pub mod separator_index;
pub mod vertex_set;

pub use clique_graph::{CliqueGraph, CliqueId, JunctionTree};
pub use error::{Error, Result};
pub use graph::Graph;
pub use vertex_set::VertexSet;
