use thiserror::Error;

/// Errors raised by graph, clique-graph, engine and scoring operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph is not chordal")]
    NotChordal,
    #[error("ordering is not a permutation of the graph's vertices")]
    NotAPermutation,
    #[error("vertices {0} and {1} are adjacent")]
    AreAdjacent(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) is not eligible for this move")]
    NotEligible(usize, usize),
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("edge ({0}, {1}) is not contained in the given clique")]
    NotInClique(usize, usize),
    #[error("separator {0} is not present in the junction tree")]
    SeparatorNotPresent(String),
    #[error("dataset has {data} columns but the model graph has {graph} vertices")]
    ColumnMismatch { data: usize, graph: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
