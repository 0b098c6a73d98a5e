use std::str::FromStr;

use super::{clique_edge_cover, ConflictGraph, DimOrigin, ItemOrigin, ReduceError, ReductionKind, ReductionMap};
use crate::instance::{ItemType, VbpInstance};

/// Encoding of the "no two adjacent vertices share a bin" rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColoringMode {
    /// One capacity-1 dimension per edge.
    Adjacency,
    /// One dimension per vertex `k` with capacity `Deg(k)`.
    Degree,
    /// One capacity-1 dimension per clique of an edge cover.
    Clique,
}

impl std::fmt::Display for ColoringMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ColoringMode::Adjacency => "adjacency",
            ColoringMode::Degree => "degree",
            ColoringMode::Clique => "clique",
        })
    }
}

impl FromStr for ColoringMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "adjacency" => Ok(ColoringMode::Adjacency),
            "degree" => Ok(ColoringMode::Degree),
            "clique" => Ok(ColoringMode::Clique),
            other => Err(format!("unknown coloring mode `{other}`")),
        }
    }
}

/// One item of demand 1 per vertex; bins are colors.
///
/// Isolated vertices would otherwise end up with an all-zero weight vector,
/// so each gets a private capacity-1 dimension (adjacency and degree modes)
/// or a singleton clique (clique mode).
pub fn coloring_to_vbp(
    g: &ConflictGraph,
    mode: ColoringMode,
) -> Result<(VbpInstance, ReductionMap), ReduceError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ReduceError::EmptyGraph);
    }
    let mut caps = Vec::new();
    let mut dims = Vec::new();
    // columns[d] = (vertex, weight) entries of dimension d
    let mut columns: Vec<Vec<(usize, u32)>> = Vec::new();
    match mode {
        ColoringMode::Adjacency => {
            for (u, v) in g.edges() {
                caps.push(1);
                dims.push(DimOrigin::Edge(u, v));
                columns.push(vec![(u, 1), (v, 1)]);
            }
            for v in (0..n).filter(|&v| g.degree(v) == 0) {
                caps.push(1);
                dims.push(DimOrigin::Isolated(v));
                columns.push(vec![(v, 1)]);
            }
        }
        ColoringMode::Degree => {
            for k in 0..n {
                let deg = g.degree(k) as u32;
                if deg == 0 {
                    caps.push(1);
                    dims.push(DimOrigin::Isolated(k));
                    columns.push(vec![(k, 1)]);
                } else {
                    caps.push(deg);
                    dims.push(DimOrigin::Degree(k));
                    let mut col = vec![(k, deg)];
                    col.extend(g.neighbors(k).iter().map(|&u| (u, 1)));
                    columns.push(col);
                }
            }
        }
        ColoringMode::Clique => {
            for clique in clique_edge_cover(g) {
                caps.push(1);
                columns.push(clique.iter().map(|&v| (v, 1)).collect());
                dims.push(if clique.len() == 1 {
                    DimOrigin::Isolated(clique[0])
                } else {
                    DimOrigin::Clique(clique)
                });
            }
        }
    }
    let p = caps.len();
    let mut weights = vec![vec![0u32; p]; n];
    for (d, col) in columns.iter().enumerate() {
        for &(v, w) in col {
            weights[v][d] = w;
        }
    }
    let items = weights
        .into_iter()
        .enumerate()
        .map(|(v, w)| ItemType::new(w, 1, (v + 1).to_string()))
        .collect();
    let inst = VbpInstance::new(caps, items)?;
    let map = ReductionMap {
        kind: ReductionKind::Coloring,
        dims,
        items: (0..n).map(ItemOrigin::Vertex).collect(),
        graph: Some(g.clone()),
        requirements: Vec::new(),
        cardinality: None,
        binary: false,
    };
    Ok((inst, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig_graph() -> ConflictGraph {
        ConflictGraph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn adjacency_has_one_dimension_per_edge() {
        let (inst, map) = coloring_to_vbp(&fig_graph(), ColoringMode::Adjacency).unwrap();
        assert_eq!(inst.capacities(), &[1, 1, 1, 1]);
        assert_eq!(inst.weights(2), &[0, 1, 1, 1]);
        assert_eq!(map.dims[0], DimOrigin::Edge(0, 1));
    }

    #[test]
    fn clique_mode_uses_the_two_cliques() {
        let (inst, _) = coloring_to_vbp(&fig_graph(), ColoringMode::Clique).unwrap();
        assert_eq!(inst.dim_count(), 2);
        assert_eq!(inst.weights(2), &[1, 1]);
        assert_eq!(inst.weights(3), &[0, 1]);
    }

    #[test]
    fn degree_mode_weights() {
        let (inst, _) = coloring_to_vbp(&fig_graph(), ColoringMode::Degree).unwrap();
        assert_eq!(inst.capacities(), &[2, 2, 3, 1]);
        assert_eq!(inst.weights(2), &[1, 1, 3, 1]);
        assert_eq!(inst.weights(3), &[0, 0, 1, 1]);
    }

    #[test]
    fn edgeless_graph_fits_one_bin() {
        let (inst, _) = coloring_to_vbp(&ConflictGraph::empty(3), ColoringMode::Degree).unwrap();
        assert!(inst.pattern_fits(&[1, 1, 1]));
    }

    #[test]
    fn empty_graph_is_rejected() {
        assert!(matches!(
            coloring_to_vbp(&ConflictGraph::empty(0), ColoringMode::Adjacency),
            Err(ReduceError::EmptyGraph)
        ));
    }

    proptest! {
        #[test]
        fn feasible_01_patterns_are_independent_sets(
            n in 1usize..=8,
            raw in proptest::collection::vec((0usize..8, 0usize..8), 0..16),
        ) {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
            let g = ConflictGraph::new(n, edges).unwrap();
            for mode in [ColoringMode::Adjacency, ColoringMode::Degree, ColoringMode::Clique] {
                let (inst, _) = coloring_to_vbp(&g, mode).unwrap();
                for mask in 0u32..(1 << n) {
                    let counts: Vec<u32> = (0..n).map(|v| mask >> v & 1).collect();
                    let independent = g.edges().all(|(u, v)| counts[u] + counts[v] < 2);
                    prop_assert_eq!(inst.pattern_fits(&counts), independent, "{:?} {:?}", mode, counts);
                }
            }
        }
    }
}
