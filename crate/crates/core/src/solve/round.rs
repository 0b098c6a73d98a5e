use super::colgen::pattern_lp;
use super::simplex::LpOutcome;
use super::SolveError;
use crate::decode::{decompose_fractional, to_bins, PackingSolution};
use crate::flowgraph::{ArcFlowGraph, Pattern};
use crate::instance::VbpInstance;

const FLOW_TOL: f64 = 1e-9;
const INTEGRAL_TOL: f64 = 1e-6;

/// Packing from a fractional arc-flow solution using at most
/// `⌈z_lp⌉ + m` bins.
///
/// The flow is split into paths; a pattern LP restricted to those paths
/// (plus single-item patterns) has a basic optimum with at most `m`
/// positive values, which are rounded up and then reduced greedily while
/// demands stay covered.
pub fn round_lp_heuristic(
    flows: &[f64],
    g: &ArcFlowGraph,
    inst: &VbpInstance,
) -> Result<PackingSolution, SolveError> {
    let m = inst.item_count();
    let paths = decompose_fractional(g, flows, FLOW_TOL);
    let covers = |counts: &[(Pattern, u64)]| {
        (0..m).all(|i| counts.iter().map(|(p, k)| p[i] as u64 * k).sum::<u64>() >= inst.demand(i))
    };
    let integral: Vec<(Pattern, u64)> = paths
        .iter()
        .filter(|(_, x)| (x - x.round()).abs() <= INTEGRAL_TOL)
        .map(|(p, x)| (p.clone(), x.round() as u64))
        .filter(|(p, k)| *k > 0 && p.iter().any(|&c| c > 0))
        .collect();
    let all_integral = paths.iter().all(|(_, x)| (x - x.round()).abs() <= INTEGRAL_TOL);
    let mut counts = if all_integral && covers(&integral) {
        integral
    } else {
        let mut columns: Vec<Pattern> =
            paths.iter().map(|(p, _)| p.clone()).filter(|p| p.iter().any(|&c| c > 0)).collect();
        for i in 0..m {
            let mut p = vec![0; m];
            p[i] = 1;
            if !columns.contains(&p) {
                columns.push(p);
            }
        }
        let res = pattern_lp::<f64>(inst, &columns);
        if res.outcome != LpOutcome::Optimal {
            return Err(SolveError::Master("infeasible"));
        }
        columns
            .into_iter()
            .zip(res.x)
            .map(|(p, x)| (p, (x - FLOW_TOL).ceil().max(0.0) as u64))
            .filter(|(_, k)| *k > 0)
            .collect()
    };
    for k in 0..counts.len() {
        while counts[k].1 > 0 {
            counts[k].1 -= 1;
            if !covers(&counts) {
                counts[k].1 += 1;
                break;
            }
        }
    }
    counts.retain(|(_, k)| *k > 0);
    Ok(to_bins(&counts, inst)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowgraph::{build_step3, compress_final};
    use crate::instance::fixtures;

    /// Fractional flow spreading `x_p` over the given paths.
    fn flow(g: &ArcFlowGraph, paths: &[(Vec<usize>, f64)]) -> Vec<f64> {
        let mut f = vec![0.0; g.arc_count()];
        for (p, x) in paths {
            for &a in p {
                f[a] += x;
            }
        }
        f
    }

    fn path(g: &ArcFlowGraph, names: &[(&str, &str, usize)]) -> Vec<usize> {
        names
            .iter()
            .map(|&(t, h, i)| {
                (0..g.arc_count())
                    .find(|&a| {
                        let arc = g.arcs()[a];
                        g.node_name(arc.tail) == t && g.node_name(arc.head) == h && arc.item == i
                    })
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn integral_flow_is_kept() {
        let inst = fixtures::example1();
        let g = build_step3(&inst).unwrap();
        let f = flow(
            &g,
            &[
                (path(&g, &[("S", "5", 1), ("5", "7", 3), ("7", "T", 0)]), 2.0),
                (path(&g, &[("S", "5", 1), ("5", "T", 0)]), 1.0),
                (path(&g, &[("S", "3", 2), ("3", "T", 0)]), 1.0),
            ],
        );
        let sol = round_lp_heuristic(&f, &g, &inst).unwrap();
        assert_eq!(sol.objective, 4);
    }

    #[test]
    fn fractional_pairs() {
        let inst = VbpInstance::one_dimensional(9, &[(4, 1), (5, 1), (3, 1)]).unwrap();
        let g = compress_final(&build_step3(&inst).unwrap());
        let lp = crate::solve::column_generation_lp::<f64>(&inst, &g, &Default::default()).unwrap();
        assert!((lp.z_lp - 1.5).abs() < 1e-9);
        // Route each half-pattern through the graph.
        let mut f = vec![0.0; g.arc_count()];
        for (p, x) in &lp.solution {
            let mut u = g.source();
            let mut left = p.clone();
            while u != g.target() {
                let a = *g
                    .out_arcs(u)
                    .iter()
                    .find(|&&a| {
                        let arc = g.arcs()[a];
                        (arc.is_loss() && left.iter().all(|&c| c == 0))
                            || (!arc.is_loss() && left[arc.item - 1] > 0)
                    })
                    .or_else(|| g.out_arcs(u).iter().find(|&&a| g.arcs()[a].is_loss()))
                    .unwrap();
                let arc = g.arcs()[a];
                if !arc.is_loss() {
                    left[arc.item - 1] -= 1;
                }
                f[a] += x;
                u = arc.head;
            }
        }
        let sol = round_lp_heuristic(&f, &g, &inst).unwrap();
        assert!(sol.objective <= 2 + 3);
        assert_eq!(sol.objective, 2);
    }
}
