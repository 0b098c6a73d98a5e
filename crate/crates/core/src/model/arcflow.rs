use super::{ArcAnnotation, MilpModel, Sense};
use crate::flowgraph::{ArcFlowGraph, NodeRole};
use crate::instance::VbpInstance;

/// Arc-flow MILP: minimise `z` subject to flow conservation at every node
/// (`−z` at the source, `+z` at the target), demand rows (`=` for the exact
/// set, `≥` otherwise) and `f ≤ b_i` on item arcs. All variables integer.
pub fn build_arcflow_model(g: &ArcFlowGraph, inst: &VbpInstance) -> MilpModel {
    let mut m = MilpModel::new("arcflow");
    let total = inst.total_demand() as i64;
    let z = m.add_var("Z", 0, Some(total), true);
    let label = |v: usize| match g.nodes()[v].role {
        NodeRole::Source => "S".to_string(),
        NodeRole::Target => "T".to_string(),
        NodeRole::Internal => g.nodes()[v].label.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    };
    let mut arc_var = Vec::with_capacity(g.arc_count());
    for (k, a) in g.arcs().iter().enumerate() {
        let upper = if a.is_loss() { None } else { Some(inst.demand(a.item - 1) as i64) };
        let v = m.add_var(format!("F_{}_{}_{}", a.tail, a.head, a.item), 0, upper, true);
        m.annotations[v] =
            Some(ArcAnnotation { arc: k, tail_label: label(a.tail), head_label: label(a.head), item: a.item });
        arc_var.push(v);
    }
    m.objective.push((z, 1));

    for node in 0..g.node_count() {
        let mut terms: Vec<(usize, i64)> = Vec::new();
        for &a in g.in_arcs(node) {
            terms.push((arc_var[a], 1));
        }
        for &a in g.out_arcs(node) {
            terms.push((arc_var[a], -1));
        }
        if node == g.source() {
            terms.push((z, 1));
        } else if node == g.target() {
            terms.push((z, -1));
        }
        m.add_constraint(format!("N{node}"), terms, Sense::Eq, 0);
    }

    let mut per_item: Vec<Vec<(usize, i64)>> = vec![Vec::new(); inst.item_count()];
    for (k, a) in g.arcs().iter().enumerate() {
        if !a.is_loss() {
            per_item[a.item - 1].push((arc_var[k], 1));
        }
    }
    for (i, terms) in per_item.into_iter().enumerate() {
        if terms.is_empty() {
            m.warnings.push(format!(
                "item {} has no arc in the graph; its demand row cannot be met",
                inst.item(i).external_id
            ));
        }
        let sense = if inst.is_exact(i) { Sense::Eq } else { Sense::Ge };
        m.add_constraint(format!("D{}", i + 1), terms, sense, inst.demand(i) as i64);
    }
    m
}
