use super::{ArcFlowGraph, NodeKey, NodeRole, RawGraph, StageStats};

/// Longest path to the target in each dimension, as a position:
/// `φ(T) = W`, `φ(u) = min over out-arcs of φ(head) − w`, `φ(S) = 0`.
pub(crate) fn target_side_labels(g: &ArcFlowGraph) -> Vec<Vec<u32>> {
    let order = g.topological_order().expect("acyclic");
    let caps = g.capacities();
    let mut phi: Vec<Vec<u32>> = vec![caps.to_vec(); g.node_count()];
    for &u in order.iter().rev() {
        if u == g.target() {
            continue;
        }
        let mut lab = caps.to_vec();
        for &a in g.out_arcs(u) {
            let arc = g.arcs()[a];
            let w = g.arc_weight(&arc);
            for d in 0..caps.len() {
                lab[d] = lab[d].min(phi[arc.head][d] - w[d]);
            }
        }
        phi[u] = lab;
    }
    phi[g.source()] = vec![0; caps.len()];
    phi
}

/// Longest path from the source in each dimension:
/// `ψ(S) = 0`, `ψ(v) = max over in-arcs of ψ(tail) + w`. The target keeps `W`.
pub(crate) fn source_side_labels(g: &ArcFlowGraph) -> Vec<Vec<u32>> {
    let order = g.topological_order().expect("acyclic");
    let p = g.capacities().len();
    let mut psi: Vec<Vec<u32>> = vec![vec![0; p]; g.node_count()];
    for &v in &order {
        for &a in g.in_arcs(v) {
            let arc = g.arcs()[a];
            let w = g.arc_weight(&arc);
            for d in 0..p {
                psi[v][d] = psi[v][d].max(psi[arc.tail][d] + w[d]);
            }
        }
    }
    psi[g.source()] = vec![0; p];
    psi[g.target()] = g.capacities().to_vec();
    psi
}

/// Rebuilds `g` with new labels, merging internal nodes that share one.
/// Levels are dropped; the target is never merged.
pub(crate) fn merge_by_labels(g: &ArcFlowGraph, labels: &[Vec<u32>], stage: &str) -> ArcFlowGraph {
    let mut raw = RawGraph::default();
    let ids: Vec<usize> = (0..g.node_count())
        .map(|v| {
            let key = if g.nodes()[v].role == NodeRole::Target {
                NodeKey::target(g.capacities())
            } else {
                NodeKey::internal(labels[v].clone())
            };
            raw.node(key)
        })
        .collect();
    for a in g.arcs() {
        raw.arc(ids[a.tail], ids[a.head], a.item);
    }
    let mut stats = g.stats.clone();
    let mut out = raw.finish(ids[g.source()], ids[g.target()], g.capacities(), g.weights(), Default::default());
    stats.stages.push(StageStats { stage: stage.into(), nodes: out.node_count(), arcs: out.arc_count() });
    out.stats = stats;
    out
}

/// Final compression: relabel by longest path from the source and merge
/// nodes with equal labels.
pub fn compress_final(g: &ArcFlowGraph) -> ArcFlowGraph {
    merge_by_labels(g, &source_side_labels(g), "step4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowgraph::testutil::within_demand;
    use crate::flowgraph::{build_step3, build_step3_with_budget, enumerate_patterns, DEFAULT_PATTERN_CAP};
    use crate::instance::fixtures;
    use proptest::prelude::*;

    #[test]
    fn example1_arc_count_does_not_grow() {
        let g = build_step3(&fixtures::example1()).unwrap();
        let c = compress_final(&g);
        assert!(c.arc_count() <= g.arc_count());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn compress_is_idempotent_and_keeps_patterns(
            inst in crate::flowgraph::build::tests::small_instance()
        ) {
            let g = build_step3_with_budget(&inst, 1_000_000).unwrap();
            let c = compress_final(&g);
            let cc = compress_final(&c);
            prop_assert_eq!(c.dump(), cc.dump());
            prop_assert!(c.arcs_cover_weights());
            // Merging may add paths that exceed a demand, never ones that
            // exceed a capacity or drop a demand-feasible pattern.
            let before = within_demand(&inst, &enumerate_patterns(&g, DEFAULT_PATTERN_CAP).unwrap());
            let after = enumerate_patterns(&c, DEFAULT_PATTERN_CAP).unwrap();
            prop_assert!(after.iter().all(|p| inst.pattern_fits(p)));
            prop_assert_eq!(before, within_demand(&inst, &after));
        }
    }
}
