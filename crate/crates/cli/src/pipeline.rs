use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use arcflow::decode::{
    decompose_flow, format_coloring, format_timetable, to_bins, validate_solution, write_solution, PackingSolution,
    ValidationReport,
};
use arcflow::flowgraph::{build_reference_pipeline, build_step3, compress_final, ArcFlowGraph};
use arcflow::instance::{parse_instance, InstanceFormat, VbpInstance};
use arcflow::model::{build_arcflow_model, lp_bound_report, write_annotations, write_model, ModelFormat, SolveStatus};
use arcflow::reduce::{
    add_binary_patterns, add_cardinality, add_conflicts, coloring_to_vbp, parse_dimacs, parse_timetable,
    timetable_to_vbp, ColoringMode, ReductionKind, ReductionMap,
};
use arcflow::solve::{oracle_exact, solve_lp_relaxation, solve_milp, OracleOptions, SolverConfig};

use crate::bench::BenchRecord;

/// Step-1 node budget when compression ratios are requested.
pub const STEP1_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Vbp,
    Bpp,
    Csp,
    Color,
    Timetable,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Vbp => "vbp",
            Problem::Bpp => "bpp",
            Problem::Csp => "csp",
            Problem::Color => "color",
            Problem::Timetable => "timetable",
        })
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vbp" => Ok(Problem::Vbp),
            "bpp" => Ok(Problem::Bpp),
            "csp" => Ok(Problem::Csp),
            "color" | "coloring" => Ok(Problem::Color),
            "timetable" | "tt" => Ok(Problem::Timetable),
            other => Err(format!("unknown problem kind `{other}`")),
        }
    }
}

/// What to read and which reductions to apply.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub mode: ColoringMode,
    pub card: Option<u32>,
    pub binary: bool,
    pub conflicts: Option<PathBuf>,
}

impl ProblemSpec {
    pub fn new(problem: Problem) -> Self {
        ProblemSpec { problem, mode: ColoringMode::Degree, card: None, binary: false, conflicts: None }
    }

    /// Short tag for reports, e.g. `color/degree` or `bpp+card3`.
    pub fn kind(&self) -> String {
        let mut s = self.problem.to_string();
        if self.problem == Problem::Color {
            s.push('/');
            s.push_str(&self.mode.to_string());
        }
        if let Some(c) = self.card {
            s.push_str(&format!("+card{c}"));
        }
        if self.conflicts.is_some() {
            s.push_str("+conflicts");
        }
        if self.binary {
            s.push_str("+binary");
        }
        s
    }
}

/// Reads an instance and applies the requested reductions.
pub fn load_problem(path: &Path, spec: &ProblemSpec) -> Result<(VbpInstance, ReductionMap)> {
    let (mut inst, mut map) = match spec.problem {
        Problem::Vbp | Problem::Bpp | Problem::Csp => {
            let format = match spec.problem {
                Problem::Vbp => InstanceFormat::Vbp,
                Problem::Bpp => InstanceFormat::Bpp,
                _ => InstanceFormat::Csp,
            };
            let inst = parse_instance(path, format).with_context(|| format!("parse {}", path.display()))?;
            let map = ReductionMap::plain(&inst);
            (inst, map)
        }
        Problem::Color => {
            let g = parse_dimacs(path).with_context(|| format!("parse {}", path.display()))?;
            coloring_to_vbp(&g, spec.mode).context("reduce")?
        }
        Problem::Timetable => {
            let tt = parse_timetable(path).with_context(|| format!("parse {}", path.display()))?;
            timetable_to_vbp(&tt).context("reduce")?
        }
    };
    if let Some(c) = spec.card {
        inst = add_cardinality(&inst, c).context("reduce")?;
        map.note_cardinality(c);
    }
    if let Some(file) = &spec.conflicts {
        if map.kind != ReductionKind::Plain && map.kind != ReductionKind::Cardinality {
            bail!("conflicts apply to packing instances only");
        }
        let g = parse_dimacs(file).with_context(|| format!("parse {}", file.display()))?;
        let before = inst.dim_count();
        let (out, cmap) = add_conflicts(&inst, &g, spec.binary).context("reduce")?;
        map.dims.extend(cmap.dims[before..].iter().cloned());
        map.kind = cmap.kind;
        map.graph = cmap.graph;
        map.binary = cmap.binary;
        inst = out;
    } else if spec.binary {
        inst = add_binary_patterns(&inst).context("reduce")?;
        map.note_binary();
    }
    Ok((inst, map))
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub solver: SolverConfig,
    /// A time limit was given explicitly.
    pub time_limited: bool,
    pub accept_feasible: bool,
    pub model_format: ModelFormat,
    /// Cross-check the optimum with the exhaustive oracle.
    pub oracle: bool,
    /// Build the step-by-step graphs to report compression ratios.
    pub reference_pipeline: bool,
    /// Directory for model, annotation and solution files.
    pub out_dir: Option<PathBuf>,
}

impl RunOptions {
    pub fn new(solver: SolverConfig) -> Self {
        RunOptions {
            model_format: solver.model_format,
            solver,
            time_limited: false,
            accept_feasible: false,
            oracle: false,
            reference_pipeline: false,
            out_dir: None,
        }
    }
}

pub struct SolveOutcome {
    pub record: BenchRecord,
    pub graph: ArcFlowGraph,
    pub packing: Option<PackingSolution>,
    pub report: Option<ValidationReport>,
    /// Solution file contents.
    pub solution_text: Option<String>,
    /// Reduction-aware rendering (colors or periods), if any.
    pub pretty: Option<String>,
    pub success: bool,
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// parse → reduce → build → compress → model → solve → decode → validate.
pub fn cmd_solve(path: &Path, spec: &ProblemSpec, opts: &RunOptions) -> Result<SolveOutcome> {
    let t0 = Instant::now();
    let name = instance_name(path);
    let (inst, map) = load_problem(path, spec)?;
    let mut record = BenchRecord::new(&name, &spec.kind());
    record.m = inst.item_count();
    record.n = inst.total_demand();
    record.p = inst.dim_count();

    let t_build = Instant::now();
    let g = compress_final(&build_step3(&inst).context("build")?);
    record.t_pp = t_build.elapsed().as_secs_f64();
    record.nv = g.node_count();
    record.na = g.arc_count();
    if opts.reference_pipeline {
        match build_reference_pipeline(&inst, Some(STEP1_BUDGET)) {
            Ok(pipe) => {
                let pct = |a: usize, b: usize| 100.0 * (1.0 - a as f64 / b as f64);
                record.pct_v = Some(pct(g.node_count(), pipe.step1.node_count()));
                record.pct_a = Some(pct(g.arc_count(), pipe.step1.arc_count()));
            }
            Err(e) => log::warn!("{name}: no compression ratios: {e}"),
        }
    }

    let model = build_arcflow_model(&g, &inst);
    for w in &model.warnings {
        log::warn!("{name}: {w}");
    }
    let mut solver = opts.solver.clone();
    solver.model_format = opts.model_format;
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir)?;
        let (text, _) = write_model(&model, opts.model_format);
        std::fs::write(dir.join(format!("{name}.{}", opts.model_format.extension())), text)?;
        std::fs::write(dir.join(format!("{name}.ann")), write_annotations(&model))?;
        solver.workdir = Some(dir.join(format!("{name}.work")));
    }

    let t_lp = Instant::now();
    let lp = solve_lp_relaxation(&model, &solver).context("solve LP")?;
    record.t_lp = t_lp.elapsed().as_secs_f64();
    if lp.status == SolveStatus::Optimal {
        record.z_lp = Some(lp.objective);
    }

    let t_ip = Instant::now();
    let sol = solve_milp(&model, &solver).context("solve MILP")?;
    record.t_ip = t_ip.elapsed().as_secs_f64();
    record.n_bb = sol.n_bb;
    record.status = sol.status.to_string();
    record.z_ip = sol.objective;

    let mut outcome = SolveOutcome {
        record,
        graph: g,
        packing: None,
        report: None,
        solution_text: None,
        pretty: None,
        success: false,
    };
    if let Some(flow) = sol.flow_solution(&model, outcome.graph.arc_count()) {
        let pats = decompose_flow(&outcome.graph, &flow).context("decode")?;
        let packing = to_bins(&pats, &inst).context("decode")?;
        let report = validate_solution(&inst, &packing, &map);
        outcome.solution_text = Some(write_solution(&packing, &inst));
        outcome.pretty = match map.kind {
            ReductionKind::Coloring => Some(format_coloring(&packing, &map)),
            ReductionKind::Timetable => Some(format_timetable(&packing, &map)),
            _ => None,
        };
        if let Some(dir) = &opts.out_dir {
            std::fs::write(dir.join(format!("{name}.sol")), outcome.solution_text.as_deref().unwrap_or(""))?;
        }
        let status_ok = match sol.status {
            SolveStatus::Optimal => true,
            SolveStatus::Feasible => opts.accept_feasible && opts.time_limited,
            _ => false,
        };
        outcome.success = report.passed() && status_ok;
        if !report.passed() {
            outcome.record.status = "invalid".into();
            log::error!("{name}: validation failed:\n{report}");
        }
        outcome.packing = Some(packing);
        outcome.report = Some(report);
    }
    if let (Some(z_lp), Some(z_ip), SolveStatus::Optimal) = (outcome.record.z_lp, outcome.record.z_ip, sol.status) {
        let report = lp_bound_report(z_lp, z_ip).context("bound check")?;
        outcome.record.gap_class = Some(report.class.to_string());
    }
    if opts.oracle {
        let oracle = oracle_exact(&inst, &OracleOptions::default()).context("oracle")?;
        if outcome.record.z_ip != Some(oracle.bins as i64) {
            outcome.success = false;
            outcome.record.status = "oracle-mismatch".into();
            log::error!("{name}: solver z = {:?}, oracle z = {}", outcome.record.z_ip, oracle.bins);
        }
    }
    outcome.record.t_tot = t0.elapsed().as_secs_f64();
    Ok(outcome)
}
