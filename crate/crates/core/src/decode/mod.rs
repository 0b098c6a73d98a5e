//! From arc flows to concrete bins, and checking any claimed packing.

mod print;
mod validate;

pub use print::{format_coloring, format_timetable, write_solution};
pub use validate::{validate_solution, ValidationReport, Violation};

use crate::flowgraph::{ArcFlowGraph, Pattern};
use crate::instance::{canonical_order, VbpInstance};
use crate::model::FlowSolution;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("flow is not conserved at node {node}: in {inflow}, out {outflow}")]
    Conservation { node: String, inflow: u64, outflow: u64 },
    #[error("source emits {outflow} units but z = {z}")]
    Objective { z: u64, outflow: u64 },
    #[error("flow vector has {found} entries for {expected} arcs")]
    Length { expected: usize, found: usize },
    #[error("{left} units of flow remain after extracting z paths")]
    Residual { left: u64 },
    #[error("item {item}: patterns hold {have} copies, demand is {need}")]
    Shortfall { item: String, have: u64, need: u64 },
}

/// A packing: grouped patterns and the bins they expand to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSolution {
    /// Distinct patterns with multiplicities, in order of first use.
    pub patterns: Vec<(Pattern, u64)>,
    /// One item-count vector per bin.
    pub bins: Vec<Pattern>,
    pub objective: usize,
}

impl PackingSolution {
    pub fn from_bins(bins: Vec<Pattern>) -> Self {
        let mut patterns: Vec<(Pattern, u64)> = Vec::new();
        for b in &bins {
            match patterns.iter_mut().find(|(p, _)| p == b) {
                Some((_, k)) => *k += 1,
                None => patterns.push((b.clone(), 1)),
            }
        }
        PackingSolution { objective: bins.len(), patterns, bins }
    }
}

/// Arc order used when leaving a node: item arcs by decreasing item id,
/// loss arcs last.
fn arc_preference(g: &ArcFlowGraph, node: usize) -> Vec<usize> {
    let mut out: Vec<usize> = g.out_arcs(node).to_vec();
    out.sort_by_key(|&a| (std::cmp::Reverse(g.arcs()[a].item), a));
    out
}

fn check_conservation(g: &ArcFlowGraph, flows: &[u64], z: u64) -> Result<(), DecodeError> {
    if flows.len() != g.arc_count() {
        return Err(DecodeError::Length { expected: g.arc_count(), found: flows.len() });
    }
    let mut inflow = vec![0u64; g.node_count()];
    let mut outflow = vec![0u64; g.node_count()];
    for (arc, &f) in g.arcs().iter().zip(flows) {
        outflow[arc.tail] += f;
        inflow[arc.head] += f;
    }
    for v in 0..g.node_count() {
        let (i, o) = (inflow[v], outflow[v]);
        let ok = if v == g.source() {
            i == 0
        } else if v == g.target() {
            o == 0
        } else {
            i == o
        };
        if !ok {
            return Err(DecodeError::Conservation { node: g.node_name(v), inflow: i, outflow: o });
        }
    }
    if outflow[g.source()] != z || inflow[g.target()] != z {
        return Err(DecodeError::Objective { z, outflow: outflow[g.source()] });
    }
    Ok(())
}

/// Splits an integral flow into source-target paths. Patterns are grouped;
/// their multiplicities sum to `z`.
pub fn decompose_flow(g: &ArcFlowGraph, sol: &FlowSolution) -> Result<Vec<(Pattern, u64)>, DecodeError> {
    check_conservation(g, &sol.flows, sol.z)?;
    let mut residual = sol.flows.clone();
    let prefs: Vec<Vec<usize>> = (0..g.node_count()).map(|v| arc_preference(g, v)).collect();
    let mut out: Vec<(Pattern, u64)> = Vec::new();
    let mut extracted = 0;
    while extracted < sol.z {
        let mut path = Vec::new();
        let mut u = g.source();
        while u != g.target() {
            // Conservation guarantees an outgoing arc with flow left.
            let a = *prefs[u].iter().find(|&&a| residual[a] > 0).expect("conserved flow continues");
            path.push(a);
            u = g.arcs()[a].head;
        }
        let k = path.iter().map(|&a| residual[a]).min().unwrap_or(0);
        let mut pattern = vec![0u32; g.item_count()];
        for &a in &path {
            residual[a] -= k;
            let arc = g.arcs()[a];
            if !arc.is_loss() {
                pattern[arc.item - 1] += 1;
            }
        }
        extracted += k;
        match out.iter_mut().find(|(p, _)| *p == pattern) {
            Some((_, m)) => *m += k,
            None => out.push((pattern, k)),
        }
    }
    let left: u64 = residual.iter().sum();
    if left > 0 {
        return Err(DecodeError::Residual { left });
    }
    Ok(out)
}

/// Path decomposition of a fractional flow. Arcs carrying at most `tol`
/// are treated as empty.
pub fn decompose_fractional(g: &ArcFlowGraph, flows: &[f64], tol: f64) -> Vec<(Pattern, f64)> {
    let mut residual = flows.to_vec();
    let prefs: Vec<Vec<usize>> = (0..g.node_count()).map(|v| arc_preference(g, v)).collect();
    let mut out: Vec<(Pattern, f64)> = Vec::new();
    // Each extraction empties at least one arc.
    for _ in 0..=g.arc_count() {
        let mut path = Vec::new();
        let mut u = g.source();
        while u != g.target() {
            match prefs[u].iter().find(|&&a| residual[a] > tol) {
                Some(&a) => {
                    path.push(a);
                    u = g.arcs()[a].head;
                }
                None => break,
            }
        }
        if path.is_empty() {
            break;
        }
        let (bottleneck, k) =
            path.iter().map(|&a| (a, residual[a])).min_by(|x, y| x.1.total_cmp(&y.1)).expect("non-empty path");
        for &a in &path {
            residual[a] -= k;
        }
        residual[bottleneck] = 0.0;
        if u != g.target() {
            // Dead end from round-off; the flow on this prefix is dropped.
            continue;
        }
        let mut pattern = vec![0u32; g.item_count()];
        for &a in &path {
            let arc = g.arcs()[a];
            if !arc.is_loss() {
                pattern[arc.item - 1] += 1;
            }
        }
        match out.iter_mut().find(|(p, _)| *p == pattern) {
            Some((_, m)) => *m += k,
            None => out.push((pattern, k)),
        }
    }
    out
}

/// Expands patterns into bins and removes excess copies so each item
/// appears exactly `b_i` times. Copies are removed from the last bins
/// first, items of smallest size ratio first. Bins left empty are dropped.
pub fn to_bins(patterns: &[(Pattern, u64)], inst: &VbpInstance) -> Result<PackingSolution, DecodeError> {
    let m = inst.item_count();
    let mut excess = vec![0u64; m];
    for i in 0..m {
        let have: u64 = patterns.iter().map(|(p, k)| p[i] as u64 * k).sum();
        if have < inst.demand(i) {
            return Err(DecodeError::Shortfall {
                item: inst.item(i).external_id.clone(),
                have,
                need: inst.demand(i),
            });
        }
        excess[i] = have - inst.demand(i);
    }
    let mut bins: Vec<Pattern> = Vec::new();
    for (p, k) in patterns {
        for _ in 0..*k {
            bins.push(p.clone());
        }
    }
    let order = canonical_order(inst);
    for &i in order.permutation.iter().rev() {
        for bin in bins.iter_mut().rev() {
            if excess[i] == 0 {
                break;
            }
            let take = (bin[i] as u64).min(excess[i]);
            bin[i] -= take as u32;
            excess[i] -= take;
        }
    }
    bins.retain(|b| b.iter().any(|&c| c > 0));
    Ok(PackingSolution::from_bins(bins))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::flowgraph::{build_step3, compress_final};
    use crate::instance::fixtures;
    use crate::model::SolveStatus;

    /// Flow that sends `k` units along the arcs of each path.
    pub fn flow_of(g: &ArcFlowGraph, paths: &[(&[usize], u64)]) -> FlowSolution {
        let mut flows = vec![0; g.arc_count()];
        let mut z = 0;
        for (p, k) in paths {
            for &a in *p {
                flows[a] += k;
            }
            z += k;
        }
        FlowSolution { z, flows, status: SolveStatus::Optimal, bound: None, n_bb: None }
    }

    fn find(g: &ArcFlowGraph, tail: &str, head: &str, item: usize) -> usize {
        (0..g.arc_count())
            .find(|&a| {
                let arc = g.arcs()[a];
                g.node_name(arc.tail) == tail && g.node_name(arc.head) == head && arc.item == item
            })
            .unwrap_or_else(|| panic!("no arc {tail}->{head} ({item})"))
    }

    #[test]
    fn example1_optimal_flow() {
        let inst = fixtures::example1();
        let g = build_step3(&inst).unwrap();
        // {5,2} twice, {5} once, {3} once.
        let p52 = [find(&g, "S", "5", 1), find(&g, "5", "7", 3), find(&g, "7", "T", 0)];
        let p5 = [find(&g, "S", "5", 1), find(&g, "5", "T", 0)];
        let p3 = [find(&g, "S", "3", 2), find(&g, "3", "T", 0)];
        let sol = flow_of(&g, &[(&p52, 2), (&p5, 1), (&p3, 1)]);
        let pats = decompose_flow(&g, &sol).unwrap();
        assert_eq!(pats.iter().map(|(_, k)| k).sum::<u64>(), 4);
        let packing = to_bins(&pats, &inst).unwrap();
        assert_eq!(packing.objective, 4);
        for i in 0..3 {
            assert_eq!(packing.bins.iter().map(|b| b[i] as u64).sum::<u64>(), inst.demand(i));
        }
    }

    #[test]
    fn single_path_of_multiplicity_k() {
        let inst = VbpInstance::one_dimensional(10, &[(10, 6)]).unwrap();
        let g = compress_final(&build_step3(&inst).unwrap());
        // S -> 10 with the item, 10 -> T by a loss arc.
        let path: Vec<usize> = (0..g.arc_count()).collect();
        assert_eq!(path.len(), 2);
        let pats = decompose_flow(&g, &flow_of(&g, &[(&path, 6)])).unwrap();
        assert_eq!(pats, vec![(vec![1], 6)]);
    }

    #[test]
    fn broken_conservation_is_rejected() {
        let inst = fixtures::example1();
        let g = build_step3(&inst).unwrap();
        let mut sol = flow_of(&g, &[(&[find(&g, "S", "5", 1), find(&g, "5", "T", 0)], 1)]);
        sol.flows[find(&g, "5", "T", 0)] = 0;
        assert!(matches!(decompose_flow(&g, &sol), Err(DecodeError::Conservation { .. })));
        sol.flows[find(&g, "5", "T", 0)] = 1;
        sol.z = 2;
        assert!(matches!(decompose_flow(&g, &sol), Err(DecodeError::Objective { .. })));
    }

    #[test]
    fn trimming_removes_only_excess() {
        let inst = fixtures::example1();
        let exact = vec![(vec![1, 0, 1], 2), (vec![1, 0, 0], 1), (vec![0, 1, 0], 1)];
        let sol = to_bins(&exact, &inst).unwrap();
        assert_eq!(sol.patterns, exact);
        // One extra copy of the size-2 item in the last bin.
        let over = vec![(vec![1, 0, 1], 2), (vec![1, 0, 0], 1), (vec![0, 1, 1], 1)];
        let sol = to_bins(&over, &inst).unwrap();
        assert_eq!(sol.objective, 4);
        assert_eq!(sol.bins[3], vec![0, 1, 0]);
        let short = vec![(vec![1, 0, 1], 2)];
        assert!(matches!(to_bins(&short, &inst), Err(DecodeError::Shortfall { .. })));
    }

    #[test]
    fn fractional_decomposition_recovers_path_weights() {
        let inst = fixtures::example1();
        let g = build_step3(&inst).unwrap();
        let p52 = [find(&g, "S", "5", 1), find(&g, "5", "7", 3), find(&g, "7", "T", 0)];
        let p3 = [find(&g, "S", "3", 2), find(&g, "3", "T", 0)];
        let mut flows = vec![0.0; g.arc_count()];
        for &a in &p52 {
            flows[a] += 2.5;
        }
        for &a in &p3 {
            flows[a] += 0.5;
        }
        let pats = decompose_fractional(&g, &flows, 1e-9);
        assert_eq!(pats.len(), 2);
        let total: f64 = pats.iter().map(|(_, k)| k).sum();
        assert!((total - 3.0).abs() < 1e-12);
        assert!(pats.contains(&(vec![1, 0, 1], 2.5)));
    }
}
