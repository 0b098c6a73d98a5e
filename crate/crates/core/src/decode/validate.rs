use std::fmt;

use super::PackingSolution;
use crate::instance::VbpInstance;
use crate::reduce::{ItemOrigin, ReductionKind, ReductionMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Bin load above capacity in a dimension (1-based bin and dimension).
    Capacity { bin: usize, dim: usize, load: u64, capacity: u32 },
    Demand { item: String, assigned: u64, demand: u64 },
    /// Both endpoints of a conflict or coloring edge in one bin.
    Edge { bin: usize, u: usize, v: usize },
    /// Two meetings of the same class, teacher or venue in one period.
    Clash { period: usize, resource: &'static str, id: usize },
    Cardinality { bin: usize, count: u64, limit: u32 },
    Binary { bin: usize, item: String, count: u32 },
    Objective { objective: usize, bins: usize },
    Shape { bin: usize, len: usize, items: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Capacity { bin, dim, load, capacity } => {
                write!(f, "bin {bin}: load {load} exceeds capacity {capacity} in dimension {dim}")
            }
            Violation::Demand { item, assigned, demand } => {
                write!(f, "item {item}: {assigned} copies assigned, demand {demand}")
            }
            Violation::Edge { bin, u, v } => write!(f, "bin {bin}: {u} and {v} are adjacent"),
            Violation::Clash { period, resource, id } => {
                write!(f, "period {period}: {resource} {id} is booked twice")
            }
            Violation::Cardinality { bin, count, limit } => {
                write!(f, "bin {bin}: {count} items, limit {limit}")
            }
            Violation::Binary { bin, item, count } => write!(f, "bin {bin}: {count} copies of item {item}"),
            Violation::Objective { objective, bins } => {
                write!(f, "objective {objective} does not match {bins} bins")
            }
            Violation::Shape { bin, len, items } => {
                write!(f, "bin {bin}: {len} counts for {items} items")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks capacities, exact demands and the semantics of the reduction
/// that produced `inst`. Bin and vertex numbers in the report are 1-based.
pub fn validate_solution(inst: &VbpInstance, sol: &PackingSolution, map: &ReductionMap) -> ValidationReport {
    let mut v = Vec::new();
    let m = inst.item_count();
    if sol.objective != sol.bins.len() || sol.patterns.iter().map(|(_, k)| *k as usize).sum::<usize>() != sol.bins.len() {
        v.push(Violation::Objective { objective: sol.objective, bins: sol.bins.len() });
    }
    for (b, bin) in sol.bins.iter().enumerate() {
        if bin.len() != m {
            v.push(Violation::Shape { bin: b + 1, len: bin.len(), items: m });
        }
    }
    if !v.is_empty() {
        return ValidationReport { violations: v };
    }
    for (b, bin) in sol.bins.iter().enumerate() {
        for (d, &cap) in inst.capacities().iter().enumerate() {
            let load: u64 = (0..m).map(|i| bin[i] as u64 * inst.weights(i)[d] as u64).sum();
            if load > cap as u64 {
                v.push(Violation::Capacity { bin: b + 1, dim: d + 1, load, capacity: cap });
            }
        }
    }
    for i in 0..m {
        let assigned: u64 = sol.bins.iter().map(|bin| bin[i] as u64).sum();
        if assigned != inst.demand(i) {
            v.push(Violation::Demand {
                item: inst.item(i).external_id.clone(),
                assigned,
                demand: inst.demand(i),
            });
        }
    }
    if let Some(g) = &map.graph {
        // Graph vertex of each item.
        let vertex: Vec<usize> = map
            .items
            .iter()
            .map(|o| match *o {
                ItemOrigin::Vertex(x) | ItemOrigin::Item(x) | ItemOrigin::Requirement(x) => x,
            })
            .collect();
        let mut item_of = vec![None; g.vertex_count()];
        for (i, &x) in vertex.iter().enumerate() {
            if x < item_of.len() {
                item_of[x] = Some(i);
            }
        }
        for (b, bin) in sol.bins.iter().enumerate() {
            for (x, y) in g.edges() {
                if let (Some(i), Some(j)) = (item_of[x], item_of[y]) {
                    if bin[i] > 0 && bin[j] > 0 {
                        v.push(Violation::Edge { bin: b + 1, u: x + 1, v: y + 1 });
                    }
                }
            }
        }
    }
    if map.kind == ReductionKind::Timetable {
        for (b, bin) in sol.bins.iter().enumerate() {
            let mut seen: Vec<(&'static str, usize, u64)> = Vec::new();
            for (i, &c) in bin.iter().enumerate() {
                let Some(ItemOrigin::Requirement(r)) = map.items.get(i) else { continue };
                let req = map.requirements[*r];
                for key in [("class", req.class), ("teacher", req.teacher), ("venue", req.venue)] {
                    match seen.iter_mut().find(|s| s.0 == key.0 && s.1 == key.1) {
                        Some(s) => s.2 += c as u64,
                        None => seen.push((key.0, key.1, c as u64)),
                    }
                }
            }
            for (resource, id, count) in seen {
                if count > 1 {
                    v.push(Violation::Clash { period: b + 1, resource, id: id + 1 });
                }
            }
        }
    }
    if let Some(limit) = map.cardinality {
        for (b, bin) in sol.bins.iter().enumerate() {
            let count: u64 = bin.iter().map(|&c| c as u64).sum();
            if count > limit as u64 {
                v.push(Violation::Cardinality { bin: b + 1, count, limit });
            }
        }
    }
    if map.binary {
        for (b, bin) in sol.bins.iter().enumerate() {
            for (i, &c) in bin.iter().enumerate() {
                if c > 1 {
                    v.push(Violation::Binary { bin: b + 1, item: inst.item(i).external_id.clone(), count: c });
                }
            }
        }
    }
    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::PackingSolution;
    use crate::instance::fixtures;
    use crate::reduce::{coloring_to_vbp, timetable_to_vbp, ColoringMode, ConflictGraph, Requirement, Timetable};

    #[test]
    fn oracle_packing_of_example1_passes() {
        let inst = fixtures::example1();
        let sol = PackingSolution::from_bins(vec![vec![1, 0, 1], vec![1, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(validate_solution(&inst, &sol, &ReductionMap::plain(&inst)).passed());
    }

    #[test]
    fn overfull_bin_is_reported() {
        let inst = fixtures::example1();
        let sol = PackingSolution::from_bins(vec![vec![1, 1, 0], vec![1, 0, 1], vec![1, 0, 1]]);
        let report = validate_solution(&inst, &sol, &ReductionMap::plain(&inst));
        assert!(report.violations.contains(&Violation::Capacity { bin: 1, dim: 1, load: 8, capacity: 7 }));
    }

    #[test]
    fn demand_mismatch_and_objective_mismatch() {
        let inst = fixtures::example1();
        let mut sol = PackingSolution::from_bins(vec![vec![1, 0, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        sol.objective = 4;
        let report = validate_solution(&inst, &sol, &ReductionMap::plain(&inst));
        assert_eq!(report.violations, vec![Violation::Objective { objective: 4, bins: 3 }]);
        sol.objective = 3;
        let report = validate_solution(&inst, &sol, &ReductionMap::plain(&inst));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Capacity { .. })));
    }

    #[test]
    fn coloring_edges_are_checked_against_the_graph() {
        let g = ConflictGraph::new(3, [(0, 1)]).unwrap();
        let (inst, map) = coloring_to_vbp(&g, ColoringMode::Degree).unwrap();
        let good = PackingSolution::from_bins(vec![vec![1, 0, 1], vec![0, 1, 0]]);
        assert!(validate_solution(&inst, &good, &map).passed());
        let bad = PackingSolution::from_bins(vec![vec![1, 1, 1]]);
        let report = validate_solution(&inst, &bad, &map);
        assert!(report.violations.contains(&Violation::Edge { bin: 1, u: 1, v: 2 }));
    }

    #[test]
    fn timetable_clashes() {
        let tt = Timetable {
            teachers: 2,
            classes: 2,
            venues: 1,
            requirements: vec![
                Requirement { class: 0, teacher: 0, venue: 0, demand: 1 },
                Requirement { class: 1, teacher: 1, venue: 0, demand: 1 },
            ],
        };
        let (inst, map) = timetable_to_vbp(&tt).unwrap();
        let bad = PackingSolution::from_bins(vec![vec![1, 1]]);
        let report = validate_solution(&inst, &bad, &map);
        assert!(report.violations.contains(&Violation::Clash { period: 1, resource: "venue", id: 1 }));
        let good = PackingSolution::from_bins(vec![vec![1, 0], vec![0, 1]]);
        assert!(validate_solution(&inst, &good, &map).passed());
    }

    #[test]
    fn cardinality_and_binary() {
        let inst = crate::instance::VbpInstance::one_dimensional(10, &[(1, 3)]).unwrap();
        let mut map = ReductionMap::plain(&inst);
        map.cardinality = Some(2);
        map.binary = true;
        let sol = PackingSolution::from_bins(vec![vec![3]]);
        let report = validate_solution(&inst, &sol, &map);
        assert!(report.violations.contains(&Violation::Cardinality { bin: 1, count: 3, limit: 2 }));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Binary { count: 3, .. })));
    }
}
