use std::collections::{BTreeMap, BTreeSet};

use super::compress::{compress_final, merge_by_labels, target_side_labels};
use super::{ArcFlowGraph, BuildStats, GraphError, NodeKey, RawGraph, StageStats, DEFAULT_STATE_BUDGET};
use crate::instance::{canonical_order, VbpInstance};

/// The four graphs of the step-by-step construction.
#[derive(Clone, Debug)]
pub struct ReferencePipeline {
    /// Uncompressed graph built item by item.
    pub step1: ArcFlowGraph,
    /// `step1` split into one level per item.
    pub step2: ArcFlowGraph,
    /// `step2` relabelled by longest path to the target.
    pub step3: ArcFlowGraph,
    /// `step3` relabelled by longest path from the source.
    pub step4: ArcFlowGraph,
}

impl ReferencePipeline {
    pub fn stages(&self) -> [&ArcFlowGraph; 4] {
        [&self.step1, &self.step2, &self.step3, &self.step4]
    }
}

/// Builds Step-1 explicitly and derives the other stages from it.
/// `budget` bounds the number of Step-1 nodes.
pub fn build_reference_pipeline(inst: &VbpInstance, budget: Option<usize>) -> Result<ReferencePipeline, GraphError> {
    let budget = budget.unwrap_or(DEFAULT_STATE_BUDGET);
    let order = canonical_order(inst);
    let caps = inst.capacities().to_vec();
    let p = caps.len();
    let weights: Vec<Vec<u32>> = inst.items().iter().map(|it| it.weights.clone()).collect();
    let zero = vec![0u32; p];

    // Step 1: for each item, chains of up to b_i copies from every node
    // present before the item.
    let mut nodes: BTreeSet<Vec<u32>> = BTreeSet::from([zero.clone()]);
    // (tail, head, rank)
    let mut arcs: BTreeSet<(Vec<u32>, Vec<u32>, usize)> = BTreeSet::new();
    for (rank, &item) in order.permutation.iter().enumerate() {
        let w = inst.weights(item);
        let before: Vec<Vec<u32>> = nodes.iter().cloned().collect();
        for start in before {
            let mut tail = start;
            for _ in 0..inst.demand(item) {
                let head: Vec<u32> = (0..p).map(|d| tail[d] + w[d]).collect();
                if (0..p).any(|d| head[d] > caps[d]) {
                    break;
                }
                arcs.insert((tail, head.clone(), rank));
                nodes.insert(head.clone());
                if nodes.len() > budget {
                    return Err(GraphError::Budget { what: "step-1 node", limit: budget, used: nodes.len() });
                }
                tail = head;
            }
        }
    }
    let item_of = |rank: usize| order.permutation[rank] + 1;

    let mut raw = RawGraph::default();
    let s = raw.node(NodeKey::internal(zero.clone()));
    let t = raw.node(NodeKey::target(&caps));
    for (a, b, rank) in &arcs {
        let (ta, hb) = (raw.node(NodeKey::internal(a.clone())), raw.node(NodeKey::internal(b.clone())));
        raw.arc(ta, hb, item_of(*rank));
    }
    for v in nodes.iter().filter(|v| **v != zero) {
        let id = raw.node(NodeKey::internal(v.clone()));
        raw.arc(id, t, 0);
    }
    let step1 = stage_graph(raw, s, t, &caps, &weights, "step1", BuildStats::default());

    // Step 2: one copy of each node per level it touches.
    let mut levels: BTreeMap<&Vec<u32>, BTreeSet<usize>> = BTreeMap::new();
    for (a, b, rank) in &arcs {
        levels.entry(a).or_default().insert(rank + 1);
        levels.entry(b).or_default().insert(rank + 1);
    }
    let mut raw = RawGraph::default();
    let first = levels.get(&zero).and_then(|l| l.first().copied()).unwrap_or(1);
    let s = raw.node(NodeKey::leveled(zero.clone(), first));
    let t = raw.node(NodeKey::target(&caps));
    for (a, b, rank) in &arcs {
        let ta = raw.node(NodeKey::leveled(a.clone(), rank + 1));
        let hb = raw.node(NodeKey::leveled(b.clone(), rank + 1));
        raw.arc(ta, hb, item_of(*rank));
    }
    for (v, ls) in &levels {
        let ls: Vec<usize> = ls.iter().copied().collect();
        for pair in ls.windows(2) {
            let lo = raw.node(NodeKey::leveled((*v).clone(), pair[0]));
            let hi = raw.node(NodeKey::leveled((*v).clone(), pair[1]));
            raw.arc(lo, hi, 0);
        }
        if **v != zero {
            for &l in &ls {
                let id = raw.node(NodeKey::leveled((*v).clone(), l));
                raw.arc(id, t, 0);
            }
        }
    }
    let step2 = stage_graph(raw, s, t, &caps, &weights, "step2", step1.stats.clone());

    let step3 = merge_by_labels(&step2, &target_side_labels(&step2), "step3");
    let step4 = compress_final(&step3);
    Ok(ReferencePipeline { step1, step2, step3, step4 })
}

fn stage_graph(
    raw: RawGraph,
    s: usize,
    t: usize,
    caps: &[u32],
    weights: &[Vec<u32>],
    stage: &str,
    mut stats: BuildStats,
) -> ArcFlowGraph {
    let mut g = raw.finish(s, t, caps, weights, BuildStats::default());
    stats.stages.push(StageStats { stage: stage.into(), nodes: g.node_count(), arcs: g.arc_count() });
    g.stats = stats;
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowgraph::{build_step3, compress_final, enumerate_patterns, DEFAULT_PATTERN_CAP};
    use crate::flowgraph::testutil::{brute_patterns, within_demand};
    use crate::instance::fixtures;
    use proptest::prelude::*;

    fn compression_example() -> VbpInstance {
        let inst = VbpInstance::one_dimensional(9, &[(4, 1), (3, 3), (2, 1)]).unwrap();
        crate::reduce::add_cardinality(&inst, 3).unwrap()
    }

    #[test]
    fn example1_step1_is_the_incremental_graph() {
        let pipe = build_reference_pipeline(&fixtures::example1(), None).unwrap();
        let g = &pipe.step1;
        let names: Vec<String> = (0..g.node_count()).map(|v| g.node_name(v)).collect();
        assert_eq!(names, vec!["S", "2", "3", "4", "5", "7", "T"]);
        assert_eq!(g.arc_count(), 11);
    }

    #[test]
    fn compression_example_stage_sizes() {
        let pipe = build_reference_pipeline(&compression_example(), None).unwrap();
        let sizes: Vec<(usize, usize)> = pipe.stages().iter().map(|g| (g.node_count(), g.arc_count())).collect();
        // Step-1 has 9 nodes besides the target.
        assert_eq!(sizes[0], (10, 18));
        assert_eq!(sizes[2], (8, 17));
        assert_eq!(sizes[3], (7, 15));
        // The one node lost in the last step is fed only by a loss arc from (4,1).
        let g3 = &pipe.step3;
        let fed_by_loss: Vec<String> = (0..g3.node_count())
            .filter(|&v| {
                let inc = g3.in_arcs(v);
                inc.len() == 1 && g3.arcs()[inc[0]].is_loss() && g3.node_name(g3.arcs()[inc[0]].tail) == "(4,1)"
            })
            .map(|v| g3.node_name(v))
            .collect();
        assert_eq!(fed_by_loss, vec!["(5,1)"]);
        let step4_names: Vec<String> = (0..pipe.step4.node_count()).map(|v| pipe.step4.node_name(v)).collect();
        assert!(!step4_names.contains(&"(5,1)".to_string()));
    }

    #[test]
    fn step2_paths_visit_levels_in_order() {
        let pipe = build_reference_pipeline(&compression_example(), None).unwrap();
        let g = &pipe.step2;
        for a in g.arcs() {
            if let (Some(lt), Some(lh)) = (g.nodes()[a.tail].level, g.nodes()[a.head].level) {
                assert!(lt <= lh);
            }
        }
    }

    #[test]
    fn single_item_stages_agree() {
        let inst = VbpInstance::one_dimensional(10, &[(4, 2)]).unwrap();
        let pipe = build_reference_pipeline(&inst, None).unwrap();
        let sizes: Vec<(usize, usize)> = pipe.stages().iter().map(|g| (g.node_count(), g.arc_count())).collect();
        assert!(sizes.iter().all(|&s| s == sizes[0]), "{sizes:?}");
    }

    #[test]
    fn example1_step4_matches_direct_build() {
        let inst = fixtures::example1();
        let pipe = build_reference_pipeline(&inst, None).unwrap();
        let direct = compress_final(&build_step3(&inst).unwrap());
        let mut a = enumerate_patterns(&pipe.step4, DEFAULT_PATTERN_CAP).unwrap();
        let mut b = enumerate_patterns(&direct, DEFAULT_PATTERN_CAP).unwrap();
        a.remove(&vec![0; 3]);
        b.remove(&vec![0; 3]);
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(build_reference_pipeline(&compression_example(), Some(3)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn compression_keeps_the_step2_pattern_set(inst in crate::flowgraph::build::tests::small_instance()) {
            let pipe = build_reference_pipeline(&inst, Some(100_000)).unwrap();
            let expected = brute_patterns(&inst);
            for g in pipe.stages() {
                prop_assert!(g.topological_order().is_ok());
                prop_assert!(g.arcs_cover_weights());
                let pats = enumerate_patterns(g, DEFAULT_PATTERN_CAP).unwrap();
                for pat in &pats {
                    prop_assert!(inst.pattern_fits(pat));
                }
                prop_assert_eq!(&within_demand(&inst, &pats), &expected);
            }
        }
    }
}
