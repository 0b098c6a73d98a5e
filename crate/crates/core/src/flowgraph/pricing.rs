use super::{ArcFlowGraph, Pattern};
use crate::scalar::Scalar;

/// Result of one pricing call.
#[derive(Clone, Debug, PartialEq)]
pub struct Priced<S> {
    pub pattern: Pattern,
    /// Total dual value of the pattern.
    pub value: S,
    /// `1 − value`.
    pub reduced_cost: S,
}

/// Longest path from source to target with arc values `duals[item]` (loss
/// arcs are worth zero), by backward dynamic programming in reverse
/// topological order. Ties keep the first arc in canonical order.
pub fn price_min_reduced_cost<S: Scalar>(g: &ArcFlowGraph, duals: &[S]) -> Priced<S> {
    assert_eq!(duals.len(), g.item_count(), "one dual per item");
    let order = g.topological_order().expect("arc-flow graphs are acyclic");
    let n = g.node_count();
    let mut f: Vec<Option<S>> = vec![None; n];
    let mut choice: Vec<Option<usize>> = vec![None; n];
    f[g.target()] = Some(S::zero());
    for &u in order.iter().rev() {
        if u == g.target() {
            continue;
        }
        for &a in g.out_arcs(u) {
            let arc = g.arcs()[a];
            let Some(fv) = &f[arc.head] else { continue };
            let gain = if arc.is_loss() { S::zero() } else { duals[arc.item - 1].clone() };
            let cand = fv.clone() + gain;
            if f[u].as_ref().map_or(true, |cur| cand > *cur) {
                f[u] = Some(cand);
                choice[u] = Some(a);
            }
        }
    }
    let value = f[g.source()].clone().unwrap_or_else(S::zero);
    let mut pattern = vec![0u32; g.item_count()];
    let mut u = g.source();
    while let Some(a) = choice[u] {
        let arc = g.arcs()[a];
        if !arc.is_loss() {
            pattern[arc.item - 1] += 1;
        }
        u = arc.head;
    }
    Priced { reduced_cost: S::one() - value.clone(), value, pattern }
}
