//! Arc-flow graphs: construction, compression, path enumeration and pricing.
//!
//! Nodes carry integer labels, one coordinate per dimension. Arcs carry the
//! 1-based index of the original item they pack, or 0 for loss arcs. Every
//! finished graph is canonical: nodes sorted by label (then level) with the
//! target last, arcs sorted by `(tail, head, item)` and free of duplicates.

mod build;
mod compress;
mod lift;
mod patterns;
mod pipeline;
mod pricing;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

pub use build::{build_step3, build_step3_with_budget};
pub use compress::compress_final;
pub use lift::Lifter;
pub use patterns::{enumerate_patterns, Pattern};
pub use pipeline::{build_reference_pipeline, ReferencePipeline};
pub use pricing::{price_min_reduced_cost, Priced};

/// Default limit on dynamic-programming states or explicit Step-1 nodes.
pub const DEFAULT_STATE_BUDGET: usize = 100_000_000;
/// Default limit on the patterns [`enumerate_patterns`] keeps per node.
pub const DEFAULT_PATTERN_CAP: usize = 1_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("{what} budget of {limit} exceeded ({used} expanded)")]
    Budget { what: &'static str, limit: usize, used: usize },
    #[error("graph contains a cycle")]
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRole {
    Source,
    Internal,
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub label: Vec<u32>,
    /// Item level, only present in Step-2 graphs.
    pub level: Option<usize>,
    pub role: NodeRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    /// 0 for loss arcs, otherwise original item index + 1.
    pub item: usize,
}

impl Arc {
    pub fn is_loss(&self) -> bool {
        self.item == 0
    }
}

/// Node and arc count of one construction stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageStats {
    pub stage: String,
    pub nodes: usize,
    pub arcs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Dynamic-programming states expanded by the direct builder.
    pub states: usize,
    pub stages: Vec<StageStats>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcFlowGraph {
    nodes: Vec<Node>,
    arcs: Vec<Arc>,
    source: usize,
    target: usize,
    capacities: Vec<u32>,
    weights: Vec<Vec<u32>>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    pub stats: BuildStats,
}

/// Node key used while a graph is under construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct NodeKey {
    pub target: bool,
    pub label: Vec<u32>,
    pub level: Option<usize>,
}

impl NodeKey {
    pub fn internal(label: Vec<u32>) -> Self {
        NodeKey { target: false, label, level: None }
    }

    pub fn leveled(label: Vec<u32>, level: usize) -> Self {
        NodeKey { target: false, label, level: Some(level) }
    }

    pub fn target(capacities: &[u32]) -> Self {
        NodeKey { target: true, label: capacities.to_vec(), level: None }
    }
}

/// Graph under construction: nodes keyed by label, arcs as key triples.
#[derive(Default)]
pub(crate) struct RawGraph {
    ids: HashMap<NodeKey, usize>,
    keys: Vec<NodeKey>,
    arcs: BTreeSet<(usize, usize, usize)>,
}

impl RawGraph {
    pub fn node(&mut self, key: NodeKey) -> usize {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.keys.len();
        self.ids.insert(key.clone(), id);
        self.keys.push(key);
        id
    }

    pub fn arc(&mut self, tail: usize, head: usize, item: usize) {
        self.arcs.insert((tail, head, item));
    }

    /// Sorts nodes and arcs into canonical order. Loss self-loops are dropped.
    pub fn finish(
        self,
        source: usize,
        target: usize,
        capacities: &[u32],
        weights: &[Vec<u32>],
        stats: BuildStats,
    ) -> ArcFlowGraph {
        let mut order: Vec<usize> = (0..self.keys.len()).collect();
        order.sort_by(|&a, &b| self.keys[a].cmp(&self.keys[b]));
        let mut new_id = vec![0; order.len()];
        for (k, &old) in order.iter().enumerate() {
            new_id[old] = k;
        }
        let nodes: Vec<Node> = order
            .iter()
            .map(|&old| {
                let key = &self.keys[old];
                let role = if old == source {
                    NodeRole::Source
                } else if old == target {
                    NodeRole::Target
                } else {
                    NodeRole::Internal
                };
                Node { label: key.label.clone(), level: key.level, role }
            })
            .collect();
        let mut arcs: Vec<Arc> = self
            .arcs
            .into_iter()
            .filter(|&(t, h, i)| !(t == h && i == 0))
            .map(|(t, h, i)| Arc { tail: new_id[t], head: new_id[h], item: i })
            .collect();
        arcs.sort();
        arcs.dedup();
        ArcFlowGraph::assemble(
            nodes,
            arcs,
            new_id[source],
            new_id[target],
            capacities.to_vec(),
            weights.to_vec(),
            stats,
        )
    }
}

impl ArcFlowGraph {
    fn assemble(
        nodes: Vec<Node>,
        arcs: Vec<Arc>,
        source: usize,
        target: usize,
        capacities: Vec<u32>,
        weights: Vec<Vec<u32>>,
        stats: BuildStats,
    ) -> Self {
        let mut out = vec![Vec::new(); nodes.len()];
        let mut inc = vec![Vec::new(); nodes.len()];
        for (a, arc) in arcs.iter().enumerate() {
            out[arc.tail].push(a);
            inc[arc.head].push(a);
        }
        ArcFlowGraph { nodes, arcs, source, target, capacities, weights, out, inc, stats }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn item_count(&self) -> usize {
        self.weights.len()
    }

    /// Weight vector carried by an arc's item (zero for loss arcs).
    pub fn arc_weight(&self, arc: &Arc) -> Vec<u32> {
        if arc.is_loss() {
            vec![0; self.capacities.len()]
        } else {
            self.weights[arc.item - 1].clone()
        }
    }

    pub fn item_weights(&self, item: usize) -> &[u32] {
        &self.weights[item]
    }

    /// Indices into [`Self::arcs`] leaving `node`.
    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn in_arcs(&self, node: usize) -> &[usize] {
        &self.inc[node]
    }

    pub fn label(&self, node: usize) -> &[u32] {
        &self.nodes[node].label
    }

    /// Kahn's algorithm, smallest ready id first.
    pub fn topological_order(&self) -> Result<Vec<usize>, GraphError> {
        let mut indeg: Vec<usize> = self.inc.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.nodes.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &a in &self.out[v] {
                let h = self.arcs[a].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.insert(h);
                }
            }
        }
        if order.len() == self.nodes.len() {
            Ok(order)
        } else {
            Err(GraphError::Cycle)
        }
    }

    /// Arcs packing each item, indexed by original item.
    pub fn arcs_per_item(&self) -> Vec<usize> {
        let mut count = vec![0; self.weights.len()];
        for a in self.arcs.iter().filter(|a| !a.is_loss()) {
            count[a.item - 1] += 1;
        }
        count
    }

    /// Text dump: counts, node lines, arc lines, then `source target`.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.nodes.len(), self.arcs.len());
        for (id, node) in self.nodes.iter().enumerate() {
            write!(out, "{id}").unwrap();
            for x in &node.label {
                write!(out, " {x}").unwrap();
            }
            if let Some(level) = node.level {
                write!(out, " L{level}").unwrap();
            }
            out.push('\n');
        }
        for a in &self.arcs {
            writeln!(out, "{} {} {}", a.tail, a.head, a.item).unwrap();
        }
        writeln!(out, "{} {}", self.source, self.target).unwrap();
        out
    }

    /// Short human-readable node name: `S`, `T` or the label.
    pub fn node_name(&self, node: usize) -> String {
        match self.nodes[node].role {
            NodeRole::Source => "S".into(),
            NodeRole::Target => "T".into(),
            NodeRole::Internal => {
                let parts: Vec<String> = self.nodes[node].label.iter().map(u32::to_string).collect();
                let base = if parts.len() == 1 { parts[0].clone() } else { format!("({})", parts.join(",")) };
                match self.nodes[node].level {
                    Some(l) => format!("{base}@{l}"),
                    None => base,
                }
            }
        }
    }

    /// Checks that every item arc is at least as long as its item.
    pub fn arcs_cover_weights(&self) -> bool {
        self.arcs.iter().filter(|a| !a.is_loss()).all(|a| {
            let w = &self.weights[a.item - 1];
            let (t, h) = (&self.nodes[a.tail].label, &self.nodes[a.head].label);
            (0..w.len()).all(|d| h[d] >= t[d] && h[d] - t[d] >= w[d])
        })
    }

    pub(crate) fn weights(&self) -> &[Vec<u32>] {
        &self.weights
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use std::collections::BTreeSet;

    /// Non-empty patterns that respect every demand.
    pub fn within_demand(inst: &VbpInstance, pats: &BTreeSet<Vec<u32>>) -> BTreeSet<Vec<u32>> {
        pats.iter()
            .filter(|p| p.iter().any(|&c| c > 0))
            .filter(|p| p.iter().enumerate().all(|(i, &c)| c as u64 <= inst.demand(i)))
            .cloned()
            .collect()
    }

    use crate::instance::VbpInstance;

    /// All item multisets that fit one bin, respect demands and are
    /// non-empty, by direct enumeration.
    pub fn brute_patterns(inst: &VbpInstance) -> BTreeSet<Vec<u32>> {
        let m = inst.item_count();
        let mut out = BTreeSet::new();
        let mut counts = vec![0u32; m];
        fn rec(inst: &VbpInstance, i: usize, counts: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
            if i == counts.len() {
                if counts.iter().any(|&c| c > 0) {
                    out.insert(counts.clone());
                }
                return;
            }
            let mut c = 0u32;
            loop {
                counts[i] = c;
                if !inst.pattern_fits(counts) || c as u64 > inst.demand(i) {
                    break;
                }
                rec(inst, i + 1, counts, out);
                c += 1;
            }
            counts[i] = 0;
        }
        rec(inst, 0, &mut counts, &mut out);
        out
    }
}
