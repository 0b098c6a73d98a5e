use std::fmt;

use super::{ConflictGraph, Requirement};
use crate::instance::VbpInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Plain,
    Coloring,
    Timetable,
    Cardinality,
    Binary,
    Conflict,
    BinaryConflict,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReductionKind::Plain => "plain",
            ReductionKind::Coloring => "coloring",
            ReductionKind::Timetable => "timetable",
            ReductionKind::Cardinality => "cardinality",
            ReductionKind::Binary => "binary",
            ReductionKind::Conflict => "conflict",
            ReductionKind::BinaryConflict => "binary_conflict",
        };
        f.write_str(s)
    }
}

/// Where a dimension of a reduced instance comes from. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimOrigin {
    /// Dimension of the source instance.
    Original(usize),
    /// One edge, capacity 1.
    Edge(usize, usize),
    /// Degree constraint of a vertex or conflicting item.
    Degree(usize),
    /// Capacity-1 dimension holding only an isolated vertex.
    Isolated(usize),
    Clique(Vec<usize>),
    Class(usize),
    Teacher(usize),
    Venue(usize),
    Cardinality(u32),
    /// At most one copy of this item per bin.
    Binary(usize),
}

impl fmt::Display for DimOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimOrigin::Original(d) => write!(f, "original dimension {}", d + 1),
            DimOrigin::Edge(u, v) => write!(f, "edge {}-{}", u + 1, v + 1),
            DimOrigin::Degree(v) => write!(f, "degree of {}", v + 1),
            DimOrigin::Isolated(v) => write!(f, "isolated vertex {}", v + 1),
            DimOrigin::Clique(c) => {
                let members: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
                write!(f, "clique {{{}}}", members.join(","))
            }
            DimOrigin::Class(c) => write!(f, "class {}", c + 1),
            DimOrigin::Teacher(t) => write!(f, "teacher {}", t + 1),
            DimOrigin::Venue(v) => write!(f, "venue {}", v + 1),
            DimOrigin::Cardinality(c) => write!(f, "cardinality {c}"),
            DimOrigin::Binary(i) => write!(f, "binary item {}", i + 1),
        }
    }
}

/// What an item of a reduced instance stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemOrigin {
    Item(usize),
    Vertex(usize),
    /// Index into [`ReductionMap::requirements`].
    Requirement(usize),
}

/// Bookkeeping needed to read a packing back in terms of the source problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub kind: ReductionKind,
    pub dims: Vec<DimOrigin>,
    pub items: Vec<ItemOrigin>,
    /// Coloring graph, or conflict graph over items.
    pub graph: Option<ConflictGraph>,
    /// Merged timetable requirements, one per item.
    pub requirements: Vec<Requirement>,
    pub cardinality: Option<u32>,
    pub binary: bool,
}

impl ReductionMap {
    pub fn plain(inst: &VbpInstance) -> Self {
        ReductionMap {
            kind: ReductionKind::Plain,
            dims: (0..inst.dim_count()).map(DimOrigin::Original).collect(),
            items: (0..inst.item_count()).map(ItemOrigin::Item).collect(),
            graph: None,
            requirements: Vec::new(),
            cardinality: None,
            binary: false,
        }
    }

    /// Records a dimension appended by [`super::add_cardinality`].
    pub fn note_cardinality(&mut self, limit: u32) {
        self.dims.push(DimOrigin::Cardinality(limit));
        self.cardinality = Some(self.cardinality.map_or(limit, |c| c.min(limit)));
        if self.kind == ReductionKind::Plain {
            self.kind = ReductionKind::Cardinality;
        }
    }

    /// Records the block appended by [`super::add_binary_patterns`].
    pub fn note_binary(&mut self) {
        self.dims.extend((0..self.items.len()).map(DimOrigin::Binary));
        self.binary = true;
        self.kind = match self.kind {
            ReductionKind::Conflict => ReductionKind::BinaryConflict,
            ReductionKind::Plain | ReductionKind::Cardinality => ReductionKind::Binary,
            k => k,
        };
    }
}
