use std::collections::BTreeSet;

use super::{ArcFlowGraph, GraphError};

/// Copies of each original item in one bin.
pub type Pattern = Vec<u32>;

/// Item multisets of all source-to-target paths. Each node keeps the set
/// of patterns completing it, filled in reverse topological order. Fails
/// once a node would hold more than `cap` patterns.
pub fn enumerate_patterns(g: &ArcFlowGraph, cap: usize) -> Result<BTreeSet<Pattern>, GraphError> {
    let order = g.topological_order()?;
    let mut sets: Vec<Option<BTreeSet<Pattern>>> = vec![None; g.node_count()];
    sets[g.target()] = Some(BTreeSet::from([vec![0u32; g.item_count()]]));
    for &u in order.iter().rev() {
        if u == g.target() {
            continue;
        }
        let mut here = BTreeSet::new();
        for &a in g.out_arcs(u) {
            let arc = g.arcs()[a];
            let Some(tail) = &sets[arc.head] else { continue };
            for p in tail {
                let mut p = p.clone();
                if !arc.is_loss() {
                    p[arc.item - 1] += 1;
                }
                here.insert(p);
            }
            if here.len() > cap {
                return Err(GraphError::Budget { what: "pattern", limit: cap, used: here.len() });
            }
        }
        sets[u] = Some(here);
    }
    Ok(sets[g.source()].take().unwrap_or_default())
}
