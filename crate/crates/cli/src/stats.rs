use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use arcflow::flowgraph::{build_reference_pipeline, build_step3_with_budget, compress_final};
use arcflow::instance::VbpInstance;

use crate::pipeline::{load_problem, ProblemSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct StageCount {
    pub stage: String,
    pub nodes: usize,
    pub arcs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphStats {
    pub stages: Vec<StageCount>,
}

impl GraphStats {
    /// Percentage of Step-1 vertices and arcs removed in `stage`.
    pub fn reduction(&self, stage: &str) -> Option<(f64, f64)> {
        let first = self.stages.iter().find(|s| s.stage == "step1")?;
        let s = self.stages.iter().find(|s| s.stage == stage)?;
        Some((
            100.0 * (1.0 - s.nodes as f64 / first.nodes as f64),
            100.0 * (1.0 - s.arcs as f64 / first.arcs as f64),
        ))
    }

    pub fn render(&self) -> String {
        let mut out = format!("{:<8} {:>10} {:>10} {:>8} {:>8}\n", "stage", "nodes", "arcs", "%v", "%a");
        for s in &self.stages {
            let (pv, pa) = match self.reduction(&s.stage) {
                Some((v, a)) => (format!("{v:.2}"), format!("{a:.2}")),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(out, "{:<8} {:>10} {:>10} {:>8} {:>8}", s.stage, s.nodes, s.arcs, pv, pa);
        }
        out
    }
}

/// Node and arc counts of the final graph and, with `reference`, of each
/// stage of the step-by-step construction.
pub fn graph_stats(inst: &VbpInstance, reference: bool, budget: usize) -> Result<GraphStats> {
    let mut stages = Vec::new();
    if reference {
        let pipe = build_reference_pipeline(inst, Some(budget)).context("reference pipeline")?;
        for (name, g) in ["step1", "step2", "step3", "step4"].iter().zip(pipe.stages()) {
            stages.push(StageCount { stage: name.to_string(), nodes: g.node_count(), arcs: g.arc_count() });
        }
    }
    let g = build_step3_with_budget(inst, budget).context("build")?;
    stages.push(StageCount { stage: "direct".into(), nodes: g.node_count(), arcs: g.arc_count() });
    let g = compress_final(&g);
    stages.push(StageCount { stage: "final".into(), nodes: g.node_count(), arcs: g.arc_count() });
    Ok(GraphStats { stages })
}

pub fn cmd_graph_stats(path: &Path, spec: &ProblemSpec, reference: bool, budget: usize) -> Result<GraphStats> {
    let (inst, _) = load_problem(path, spec)?;
    graph_stats(&inst, reference, budget)
}
