//! Reductions from related problems to vector packing.

mod cliques;
mod coloring;
mod graph;
mod map;
mod side;
mod timetable;

pub use cliques::{clique_edge_cover, maximal_cliques};
pub use coloring::{coloring_to_vbp, ColoringMode};
pub use graph::{parse_dimacs, parse_dimacs_str, queen_graph, write_dimacs, ConflictGraph};
pub use map::{DimOrigin, ItemOrigin, ReductionKind, ReductionMap};
pub use side::{add_binary_patterns, add_cardinality, add_conflicts};
pub use timetable::{
    parse_timetable, parse_timetable_str, timetable_to_vbp, write_timetable, Requirement, Timetable,
};

use crate::instance::InstanceError;

#[derive(Debug, thiserror::Error)]
pub enum ReduceError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("conflict graph has {found} vertices but the instance has {expected} items")]
    VertexCountMismatch { expected: usize, found: usize },
    #[error("timetable has no requirements")]
    NoRequirements,
    #[error("requirement {index}: {message}")]
    BadRequirement { index: usize, message: String },
    #[error("cardinality limit must be at least 1")]
    ZeroLimit,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
