//! Solving: an external-solver adapter, column generation over the
//! arc-flow graph, an exhaustive oracle and LP rounding.

mod colgen;
mod external;
mod oracle;
mod round;
pub mod simplex;

use std::path::PathBuf;

pub use colgen::{column_generation_lp, pattern_lp, ColGenConfig, ColGenResult};
pub use external::{parse_cbc, parse_highs, run_solver, RawSolution, SolutionFormat, HIGHSPY_TEMPLATE};
pub use oracle::{oracle_exact, OracleOptions, OracleResult};
pub use round::round_lp_heuristic;

use crate::decode::DecodeError;
use crate::flowgraph::GraphError;
use crate::model::{FlowSolution, MilpModel, ModelFormat, SolveStatus};

/// Absolute tolerance for accepting a solver value as integral.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-4;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("no MILP solver found; set ARCFLOW_SOLVER_CMD or install cbc or highs")]
    NoSolver,
    #[error("solver adapter: {message}")]
    Adapter { message: String, output: String },
    #[error("consistency: {0}")]
    Consistency(String),
    #[error("{what} budget of {limit} exceeded")]
    Budget { what: &'static str, limit: usize },
    #[error("column generation did not converge within {0} iterations")]
    Iterations(usize),
    #[error("master problem is {0}")]
    Master(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How to call the external solver.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Command template. Placeholders: `{model}`, `{solution}`,
    /// `{time_limit}`, `{threads}`, `{abs_gap}`, `{rel_gap}`, `{shim}`.
    pub command: String,
    pub format: SolutionFormat,
    pub model_format: ModelFormat,
    /// Seconds, positive.
    pub time_limit: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub threads: usize,
    /// Where model and solution files go; a fresh temporary directory
    /// per solve when `None`.
    pub workdir: Option<PathBuf>,
}

impl SolverConfig {
    pub fn new(command: impl Into<String>, format: SolutionFormat) -> Self {
        SolverConfig {
            command: command.into(),
            format,
            model_format: ModelFormat::Lp,
            time_limit: 3600.0,
            abs_gap: 1.0 - 1e-5,
            rel_gap: 0.0,
            threads: 1,
            workdir: None,
        }
    }

    /// Template with the format inferred from the command.
    pub fn from_template(command: &str) -> Self {
        Self::new(command, external::guess_format(command))
    }

    /// First available solver (see the README for the search order).
    pub fn discover() -> Result<Self, SolveError> {
        let (cmd, format) = external::discover().ok_or(SolveError::NoSolver)?;
        Ok(Self::new(cmd, format))
    }

    pub fn with_time_limit(mut self, seconds: f64) -> Self {
        assert!(seconds > 0.0, "time limit must be positive");
        self.time_limit = seconds;
        self
    }
}

/// Timings of one pipeline run, in seconds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    /// Graph construction.
    pub t_pp: f64,
    /// Root relaxation.
    pub t_lp: f64,
    /// Integer solve.
    pub t_ip: f64,
    pub n_bb: Option<u64>,
    pub t_tot: f64,
}

/// Integer solution of a model, verified exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct MilpSolution {
    pub status: SolveStatus,
    pub objective: Option<i64>,
    /// One value per model variable, when a solution exists.
    pub values: Option<Vec<i64>>,
    pub bound: Option<f64>,
    pub n_bb: Option<u64>,
}

impl MilpSolution {
    /// Arc flows of an arc-flow model solution.
    pub fn flow_solution(&self, model: &MilpModel, arc_count: usize) -> Option<FlowSolution> {
        let values = self.values.as_ref()?;
        let mut flows = vec![0; arc_count];
        let mut z = 0;
        for ((var, ann), &v) in model.variables.iter().zip(&model.annotations).zip(values) {
            match ann {
                Some(a) => flows[a.arc] = v as u64,
                None if var.name == "Z" => z = v as u64,
                None => {}
            }
        }
        Some(FlowSolution { z, flows, status: self.status, bound: self.bound, n_bb: self.n_bb })
    }
}

/// Solves `model` as a MILP. Values are rounded and re-checked against every
/// row in integer arithmetic.
pub fn solve_milp(model: &MilpModel, cfg: &SolverConfig) -> Result<MilpSolution, SolveError> {
    let raw = run_solver(model, cfg)?;
    let status = raw.status.unwrap_or(SolveStatus::Error);
    let mut sol = MilpSolution { status, objective: None, values: None, bound: raw.bound, n_bb: raw.nodes };
    if !raw.has_values || !matches!(status, SolveStatus::Optimal | SolveStatus::Timeout | SolveStatus::Feasible) {
        return Ok(sol);
    }
    let mut values = Vec::with_capacity(model.variables.len());
    for v in &model.variables {
        let x = raw.columns.get(&v.name).copied().unwrap_or(0.0);
        let r = x.round();
        if v.integer && (x - r).abs() > INTEGRALITY_TOLERANCE {
            if status == SolveStatus::Timeout {
                // Stopped before an incumbent; CBC then writes the LP point.
                return Ok(sol);
            }
            return Err(SolveError::Consistency(format!("{} = {x} is not integral", v.name)));
        }
        values.push(r as i64);
    }
    if !model.is_feasible(&values) {
        return Err(SolveError::Consistency("rounded solution violates a row or bound".into()));
    }
    let obj = model.objective_value(&values);
    if let Some(o) = raw.objective {
        if (o - obj as f64).abs() > 1e-3 {
            return Err(SolveError::Consistency(format!("reported objective {o}, recomputed {obj}")));
        }
    }
    if status == SolveStatus::Timeout {
        sol.status = SolveStatus::Feasible;
    }
    sol.objective = Some(obj);
    sol.values = Some(values);
    Ok(sol)
}

/// Continuous relaxation with row duals.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    /// One dual per model row (0 when the solver reported none).
    pub duals: Vec<f64>,
}

impl LpSolution {
    /// Arc flows of an arc-flow relaxation, indexed by arc.
    pub fn arc_flows(&self, model: &MilpModel, arc_count: usize) -> Vec<f64> {
        let mut flows = vec![0.0; arc_count];
        for (ann, &v) in model.annotations.iter().zip(&self.values) {
            if let Some(a) = ann {
                flows[a.arc] = v;
            }
        }
        flows
    }

    /// Duals of rows named `D<i>`, by item index.
    pub fn demand_duals(&self, model: &MilpModel, items: usize) -> Vec<f64> {
        let mut y = vec![0.0; items];
        for (c, &d) in model.constraints.iter().zip(&self.duals) {
            if let Some(i) = c.name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
                if (1..=items).contains(&i) {
                    y[i - 1] = d;
                }
            }
        }
        y
    }
}

pub fn solve_lp_relaxation(model: &MilpModel, cfg: &SolverConfig) -> Result<LpSolution, SolveError> {
    let relaxed = model.relaxed();
    let raw = run_solver(&relaxed, cfg)?;
    let status = raw.status.unwrap_or(SolveStatus::Error);
    if status != SolveStatus::Optimal || !raw.has_values {
        return Ok(LpSolution { status, objective: f64::NAN, values: Vec::new(), duals: Vec::new() });
    }
    let values: Vec<f64> =
        relaxed.variables.iter().map(|v| raw.columns.get(&v.name).copied().unwrap_or(0.0)).collect();
    let duals = relaxed.constraints.iter().map(|c| raw.duals.get(&c.name).copied().unwrap_or(0.0)).collect();
    let objective = raw.objective.unwrap_or_else(|| {
        relaxed.objective.iter().map(|&(v, a)| a as f64 * values[v]).sum()
    });
    Ok(LpSolution { status, objective, values, duals })
}
