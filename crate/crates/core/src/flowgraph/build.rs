use std::collections::{BTreeSet, HashMap};

use super::{ArcFlowGraph, BuildStats, GraphError, Lifter, NodeKey, RawGraph, StageStats, DEFAULT_STATE_BUDGET};
use crate::instance::{canonical_order, VbpInstance};

/// Interned label vectors.
#[derive(Default)]
struct Labels {
    ids: HashMap<Vec<u32>, u32>,
    all: Vec<Vec<u32>>,
}

impl Labels {
    fn intern(&mut self, x: Vec<u32>) -> u32 {
        if let Some(&id) = self.ids.get(&x) {
            return id;
        }
        let id = self.all.len() as u32;
        self.ids.insert(x.clone(), id);
        self.all.push(x);
        id
    }

    fn get(&self, id: u32) -> &[u32] {
        &self.all[id as usize]
    }
}

struct Frame {
    x: u32,
    i: usize,
    c: u64,
    /// 0: about to try option 1; 1: about to try option 2; 2: done.
    stage: u8,
    up: Option<u32>,
    u: Vec<u32>,
}

/// Builds the Step-3 graph directly with the default state budget.
pub fn build_step3(inst: &VbpInstance) -> Result<ArcFlowGraph, GraphError> {
    build_step3_with_budget(inst, DEFAULT_STATE_BUDGET)
}

/// Direct Step-3 construction.
///
/// Memoised over lifted states `(x, i, c)`: `x` is the space used so far,
/// `i` the current item rank and `c` the copies of it already placed. From
/// each state the builder may move to the next item (option 1) or place one
/// more copy of item `i` (option 2). The node of a state is labelled with
/// the componentwise minimum of `head − weight` over its outgoing arcs.
pub fn build_step3_with_budget(inst: &VbpInstance, budget: usize) -> Result<ArcFlowGraph, GraphError> {
    let order = canonical_order(inst);
    let m = inst.item_count();
    let caps = inst.capacities().to_vec();
    let ranked_w: Vec<&[u32]> = order.permutation.iter().map(|&i| inst.weights(i)).collect();
    let ranked_b: Vec<u64> = order.permutation.iter().map(|&i| inst.demand(i)).collect();
    let mut lifter = Lifter::new(inst, &order);
    let mut labels = Labels::default();
    let top = labels.intern(caps.clone());
    let mut memo: HashMap<(u32, usize, u64), u32> = HashMap::new();
    let mut nodes: BTreeSet<u32> = BTreeSet::new();
    // (tail label, head label, original item + 1)
    let mut arcs: BTreeSet<(u32, u32, usize)> = BTreeSet::new();

    let mut stack: Vec<Frame> = Vec::new();
    let mut ret: Option<u32> = None;
    let mut pending: Option<(Vec<u32>, usize, u64)> = Some((vec![0; caps.len()], 0, 0));
    loop {
        if let Some((x, i, c)) = pending.take() {
            let lifted = lifter.lift(&x, i, c);
            let xid = labels.intern(lifted);
            if let Some(&u) = memo.get(&(xid, i, c)) {
                ret = Some(u);
            } else {
                if memo.len() >= budget {
                    return Err(GraphError::Budget { what: "state", limit: budget, used: memo.len() });
                }
                stack.push(Frame { x: xid, i, c, stage: 0, up: None, u: caps.clone() });
                ret = None;
            }
        }
        let Some(frame) = stack.last_mut() else { break };
        let i = frame.i;
        let w = ranked_w[i];
        match frame.stage {
            0 => {
                frame.stage = 1;
                if i + 1 < m {
                    pending = Some((labels.get(frame.x).to_vec(), i + 1, 0));
                }
                continue;
            }
            1 => {
                if i + 1 < m {
                    let up = ret.take().expect("option 1 result");
                    frame.up = Some(up);
                    frame.u = labels.get(up).to_vec();
                }
                frame.stage = 2;
                let x = labels.get(frame.x);
                if frame.c < ranked_b[i] && (0..caps.len()).all(|d| x[d] + w[d] <= caps[d]) {
                    let next: Vec<u32> = (0..caps.len()).map(|d| x[d] + w[d]).collect();
                    pending = Some((next, i, frame.c + 1));
                    continue;
                }
                ret = None;
            }
            _ => {}
        }
        // stage 2: fold in option 2 (if it ran) and return.
        let frame = stack.pop().expect("frame");
        let mut u = frame.u;
        if let Some(v) = ret.take() {
            let vl = labels.get(v);
            for d in 0..caps.len() {
                u[d] = u[d].min(vl[d] - w[d]);
            }
            let uid = labels.intern(u);
            arcs.insert((uid, v, order.permutation[i] + 1));
            nodes.insert(uid);
            nodes.insert(v);
            if let Some(up) = frame.up {
                if up != uid {
                    arcs.insert((uid, up, 0));
                    nodes.insert(up);
                }
            }
            memo.insert((frame.x, frame.i, frame.c), uid);
            ret = Some(uid);
        } else {
            let uid = frame.up.unwrap_or(top);
            memo.insert((frame.x, frame.i, frame.c), uid);
            ret = Some(uid);
        }
    }
    let source = ret.expect("root state result");
    let states = memo.len();

    let mut raw = RawGraph::default();
    let zero = vec![0; caps.len()];
    // The source is the unique minimum, so it can take the all-zero label.
    let node_key = |id: u32| {
        if id == source {
            NodeKey::internal(zero.clone())
        } else {
            NodeKey::internal(labels.get(id).to_vec())
        }
    };
    let s = raw.node(node_key(source));
    let t = raw.node(NodeKey::target(&caps));
    for &(a, b, item) in &arcs {
        let (ta, hb) = (raw.node(node_key(a)), raw.node(node_key(b)));
        raw.arc(ta, hb, item);
    }
    for &n in nodes.iter().filter(|&&n| n != source) {
        let id = raw.node(node_key(n));
        raw.arc(id, t, 0);
    }
    let weights: Vec<Vec<u32>> = inst.items().iter().map(|it| it.weights.clone()).collect();
    let mut g = raw.finish(s, t, &caps, &weights, BuildStats { states, stages: Vec::new() });
    g.stats.stages.push(StageStats { stage: "step3".into(), nodes: g.node_count(), arcs: g.arc_count() });
    Ok(g)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::flowgraph::testutil::{brute_patterns, within_demand};
    use crate::flowgraph::{compress_final, enumerate_patterns, DEFAULT_PATTERN_CAP};
    use crate::instance::{fixtures, ItemType};
    use proptest::prelude::*;

    fn arc_names(g: &ArcFlowGraph) -> Vec<(String, String, usize)> {
        g.arcs().iter().map(|a| (g.node_name(a.tail), g.node_name(a.head), a.item)).collect()
    }

    #[test]
    fn example1_direct_graph() {
        let g = build_step3(&fixtures::example1()).unwrap();
        let labels: Vec<String> = (0..g.node_count()).map(|v| g.node_name(v)).collect();
        assert_eq!(labels, vec!["S", "3", "5", "7", "T"]);
        let s = |a: &str, b: &str, i| (a.to_string(), b.to_string(), i);
        assert_eq!(
            arc_names(&g),
            vec![
                s("S", "3", 0),
                s("S", "3", 2),
                s("S", "5", 1),
                s("3", "5", 3),
                s("3", "T", 0),
                s("5", "7", 3),
                s("5", "T", 0),
                s("7", "T", 0),
            ]
        );
        assert!(g.arcs_cover_weights());
    }

    #[test]
    fn single_full_item() {
        let g = build_step3(&VbpInstance::one_dimensional(7, &[(7, 1)]).unwrap()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.arc_count(), 2);
        assert_eq!(g.arcs().iter().filter(|a| a.is_loss()).count(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let err = build_step3_with_budget(&fixtures::example1(), 2).unwrap_err();
        assert!(matches!(err, GraphError::Budget { limit: 2, .. }));
    }

    #[test]
    fn cardinality_example_has_two_coordinate_labels() {
        let inst = crate::reduce::add_cardinality(&fixtures::example1(), 3).unwrap();
        let g = build_step3(&inst).unwrap();
        assert!(g.nodes().iter().all(|n| n.label.len() == 2));
        let pats = enumerate_patterns(&g, DEFAULT_PATTERN_CAP).unwrap();
        assert!(pats.iter().all(|p| p.iter().sum::<u32>() <= 3));
        assert_eq!(within_demand(&inst, &pats), brute_patterns(&inst));
    }

    pub(crate) fn small_instance() -> impl Strategy<Value = VbpInstance> {
        (1usize..=2, 1u32..=20).prop_flat_map(|(p, cap)| {
            let item = (proptest::collection::vec(0u32..=cap, p), 1u64..=4);
            proptest::collection::vec(item, 1..=6).prop_map(move |raw| {
                let items = raw
                    .into_iter()
                    .enumerate()
                    .map(|(k, (mut w, b))| {
                        if w.iter().all(|&x| x == 0) {
                            w[0] = 1;
                        }
                        ItemType::new(w, b, (k + 1).to_string())
                    })
                    .collect();
                VbpInstance::new(vec![cap; p], items).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn paths_are_exactly_the_valid_patterns(inst in small_instance()) {
            let g = build_step3(&inst).unwrap();
            prop_assert!(g.topological_order().is_ok());
            prop_assert!(g.arcs_cover_weights());
            let pats = enumerate_patterns(&g, DEFAULT_PATTERN_CAP).unwrap();
            for pat in &pats {
                prop_assert!(inst.pattern_fits(pat));
            }
            prop_assert_eq!(within_demand(&inst, &pats), brute_patterns(&inst));
            let c = compress_final(&g);
            let cpats = enumerate_patterns(&c, DEFAULT_PATTERN_CAP).unwrap();
            for pat in &cpats {
                prop_assert!(inst.pattern_fits(pat));
            }
            prop_assert_eq!(within_demand(&inst, &cpats), brute_patterns(&inst));
        }
    }
}
