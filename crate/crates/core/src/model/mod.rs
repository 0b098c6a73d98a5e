//! Solver-agnostic MILP models and their text formats.

mod arcflow;
mod assignment;
mod bounds;
mod write;

pub use arcflow::build_arcflow_model;
pub use assignment::{build_assignment_model, first_fit_decreasing};
pub use bounds::{ceil_lp, lp_bound_report, BoundError, BoundReport, GapClass, LP_TOLERANCE};
pub use write::{write_annotations, write_model, ModelFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: Option<i64>,
    pub integer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)`, variables in increasing order.
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// What a variable of an arc-flow model stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcAnnotation {
    /// Index into the graph's arc list.
    pub arc: usize,
    pub tail_label: String,
    pub head_label: String,
    /// 0 for loss arcs, otherwise original item index + 1.
    pub item: usize,
}

/// A minimisation MILP with integer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilpModel {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Objective coefficients, minimised.
    pub objective: Vec<(usize, i64)>,
    /// Per variable, the arc it carries flow on (arc-flow models only).
    pub annotations: Vec<Option<ArcAnnotation>>,
    pub warnings: Vec<String>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel {
            name: name.into(),
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            annotations: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: i64, upper: Option<i64>, integer: bool) -> usize {
        self.variables.push(Variable { name: name.into(), lower, upper, integer });
        self.annotations.push(None);
        self.variables.len() - 1
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, mut terms: Vec<(usize, i64)>, sense: Sense, rhs: i64) {
        terms.sort_by_key(|&(v, _)| v);
        self.constraints.push(Constraint { name: name.into(), terms, sense, rhs });
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Same model with every integrality requirement dropped.
    pub fn relaxed(&self) -> Self {
        let mut m = self.clone();
        for v in &mut m.variables {
            v.integer = false;
        }
        m
    }

    /// Whether an integer point satisfies every bound and row.
    pub fn is_feasible(&self, values: &[i64]) -> bool {
        if values.len() != self.variables.len() {
            return false;
        }
        let bounds_ok = self
            .variables
            .iter()
            .zip(values)
            .all(|(v, &x)| x >= v.lower && v.upper.map_or(true, |u| x <= u));
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs: i128 = c.terms.iter().map(|&(v, a)| a as i128 * values[v] as i128).sum();
                let rhs = c.rhs as i128;
                match c.sense {
                    Sense::Le => lhs <= rhs,
                    Sense::Ge => lhs >= rhs,
                    Sense::Eq => lhs == rhs,
                }
            })
    }

    pub fn objective_value(&self, values: &[i64]) -> i64 {
        self.objective.iter().map(|&(v, a)| a * values[v]).sum()
    }
}

/// Outcome reported by a solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Timeout,
    Error,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
            SolveStatus::Error => "error",
        };
        f.write_str(s)
    }
}

/// Integral arc flows returned for an arc-flow model.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution {
    pub z: u64,
    /// One entry per graph arc.
    pub flows: Vec<u64>,
    pub status: SolveStatus,
    /// Best bound reported by the solver, if any.
    pub bound: Option<f64>,
    /// Branch-and-bound nodes, when the solver reports them.
    pub n_bb: Option<u64>,
}
