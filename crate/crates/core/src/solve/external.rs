//! File-based adapter for external MILP/LP solvers.

use std::collections::HashMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use wait_timeout::ChildExt;

use super::{SolveError, SolverConfig};
use crate::model::{write_model, MilpModel, SolveStatus};

const SHIM: &str = include_str!("highs_shim.py");

/// Solution-file dialect of a solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionFormat {
    /// CBC `solu` output.
    Cbc,
    /// HiGHS raw solution file.
    Highs,
}

impl std::str::FromStr for SolutionFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cbc" => Ok(SolutionFormat::Cbc),
            "highs" => Ok(SolutionFormat::Highs),
            other => Err(format!("unknown solution format `{other}` (expected cbc or highs)")),
        }
    }
}

/// Parsed solver output, keyed by name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawSolution {
    pub status: Option<SolveStatus>,
    pub objective: Option<f64>,
    pub columns: HashMap<String, f64>,
    /// Row duals, when the solver wrote them.
    pub duals: HashMap<String, f64>,
    pub bound: Option<f64>,
    pub nodes: Option<u64>,
    /// Whether the file carried primal values.
    pub has_values: bool,
}

pub(crate) fn cbc_template(program: &str) -> String {
    format!(
        "{program} {{model}} sec {{time_limit}} threads {{threads}} allow {{abs_gap}} \
         ratio {{rel_gap}} printi all solve solu {{solution}}"
    )
}

pub(crate) fn highs_template(program: &str) -> String {
    format!("{program} --model_file {{model}} --solution_file {{solution}} --time_limit {{time_limit}}")
}

pub const HIGHSPY_TEMPLATE: &str =
    "python3 {shim} {model} {solution} {time_limit} {threads} {abs_gap} {rel_gap}";

fn on_path(program: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join(program)).find(|p| p.is_file())
}

fn python_ok(code: &str) -> Option<String> {
    let out = Command::new("python3").args(["-c", code]).stderr(Stdio::null()).output().ok()?;
    out.status.success().then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}

/// Finds a solver: environment override, `cbc` or `highs` on `PATH`, the CBC
/// binary bundled with PuLP, then HiGHS through `highspy`.
pub(crate) fn discover() -> Option<(String, SolutionFormat)> {
    if let Ok(cmd) = std::env::var("ARCFLOW_SOLVER_CMD") {
        if !cmd.trim().is_empty() {
            let format = std::env::var("ARCFLOW_SOLVER_FORMAT")
                .ok()
                .and_then(|f| f.parse().ok())
                .unwrap_or_else(|| guess_format(&cmd));
            return Some((cmd, format));
        }
    }
    if let Some(p) = on_path("cbc") {
        return Some((cbc_template(&p.to_string_lossy()), SolutionFormat::Cbc));
    }
    if let Some(p) = on_path("highs") {
        return Some((highs_template(&p.to_string_lossy()), SolutionFormat::Highs));
    }
    if let Some(p) = python_ok("import pulp, os; print(os.path.realpath(pulp.PULP_CBC_CMD().path))") {
        if Path::new(&p).is_file() {
            return Some((cbc_template(&p), SolutionFormat::Cbc));
        }
    }
    if python_ok("import highspy").is_some() {
        return Some((HIGHSPY_TEMPLATE.to_string(), SolutionFormat::Highs));
    }
    None
}

pub(crate) fn guess_format(cmd: &str) -> SolutionFormat {
    if cmd.to_ascii_lowercase().contains("highs") {
        SolutionFormat::Highs
    } else {
        SolutionFormat::Cbc
    }
}

/// Writes `model`, runs the configured command and parses its output.
pub fn run_solver(model: &MilpModel, cfg: &SolverConfig) -> Result<RawSolution, SolveError> {
    let tmp;
    let dir: &Path = match &cfg.workdir {
        Some(d) => {
            fs::create_dir_all(d)?;
            d
        }
        None => {
            tmp = tempfile::Builder::new().prefix("arcflow-").tempdir()?;
            tmp.path()
        }
    };
    let model_path = dir.join(format!("model.{}", cfg.model_format.extension()));
    let sol_path = dir.join("solution.sol");
    let _ = fs::remove_file(&sol_path);
    let (text, warnings) = write_model(model, cfg.model_format);
    for w in warnings {
        log::warn!("{w}");
    }
    fs::write(&model_path, text)?;
    let shim_path = dir.join("highs_shim.py");
    if cfg.command.contains("{shim}") {
        fs::write(&shim_path, SHIM)?;
    }

    let subst = |tok: &str| {
        tok.replace("{model}", &model_path.to_string_lossy())
            .replace("{solution}", &sol_path.to_string_lossy())
            .replace("{time_limit}", &format!("{}", cfg.time_limit))
            .replace("{threads}", &cfg.threads.to_string())
            .replace("{abs_gap}", &format!("{}", cfg.abs_gap))
            .replace("{rel_gap}", &format!("{}", cfg.rel_gap))
            .replace("{shim}", &shim_path.to_string_lossy())
    };
    let argv: Vec<String> = cfg.command.split_whitespace().map(subst).collect();
    let Some((program, args)) = argv.split_first() else {
        return Err(SolveError::NoSolver);
    };
    let out_path = dir.join("solver.log");
    let log_file = File::create(&out_path)?;
    let mut child = Command::new(program)
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::null())
        .stdout(Stdio::from(log_file.try_clone()?))
        .stderr(Stdio::from(log_file))
        .spawn()
        .map_err(|e| SolveError::Adapter { message: format!("cannot start `{program}`: {e}"), output: String::new() })?;
    // The solver enforces the limit itself; this is a backstop.
    let grace = Duration::from_secs_f64(cfg.time_limit * 2.0 + 30.0);
    let start = Instant::now();
    let status = match child.wait_timeout(grace)? {
        Some(s) => s,
        None => {
            let _ = child.kill();
            let _ = child.wait();
            log::warn!("solver killed after {:.1}s", start.elapsed().as_secs_f64());
            return Ok(RawSolution { status: Some(SolveStatus::Timeout), ..Default::default() });
        }
    };
    let output = fs::read_to_string(&out_path).unwrap_or_default();
    let sol = match fs::read_to_string(&sol_path) {
        Ok(s) => s,
        Err(_) => {
            return Err(SolveError::Adapter {
                message: format!("solver exited with {status} without writing a solution file"),
                output,
            })
        }
    };
    let mut raw = match cfg.format {
        SolutionFormat::Cbc => parse_cbc(&sol, model),
        SolutionFormat::Highs => parse_highs(&sol),
    }
    .map_err(|message| SolveError::Adapter { message, output: output.clone() })?;
    scan_log(&output, &mut raw);
    Ok(raw)
}

fn first_number(s: &str) -> Option<f64> {
    s.split(|c: char| c.is_whitespace() || c == ':' || c == '=')
        .find_map(|t| t.parse::<f64>().ok())
}

/// Picks node counts and bounds out of the solver log.
fn scan_log(output: &str, raw: &mut RawSolution) {
    for line in output.lines() {
        let t = line.trim();
        for key in ["Enumerated nodes", "Nodes"] {
            if let Some(rest) = t.strip_prefix(key) {
                if let Some(v) = first_number(rest) {
                    if v >= 0.0 {
                        raw.nodes = Some(v as u64);
                    }
                }
            }
        }
        for key in ["Lower bound", "Dual bound"] {
            if let Some(rest) = t.strip_prefix(key) {
                if let Some(v) = first_number(rest) {
                    if v.is_finite() && v.abs() < 1e40 {
                        raw.bound = Some(v);
                    }
                }
            }
        }
    }
    if raw.bound.is_none() && raw.status == Some(SolveStatus::Optimal) {
        raw.bound = raw.objective;
    }
}

/// CBC `solu` file: a status line, then `index name value [dual]` lines,
/// rows first when all rows were printed. Infeasible entries carry `**`.
pub fn parse_cbc(text: &str, model: &MilpModel) -> Result<RawSolution, String> {
    let mut lines = text.lines();
    let head = lines.next().ok_or("empty solution file")?.trim();
    let status = if head.starts_with("Optimal") {
        SolveStatus::Optimal
    } else if head.starts_with("Infeasible") || head.starts_with("Integer infeasible") {
        SolveStatus::Infeasible
    } else if head.starts_with("Stopped") {
        SolveStatus::Timeout
    } else {
        SolveStatus::Error
    };
    let objective = head.rsplit(' ').next().and_then(|v| v.parse::<f64>().ok()).filter(|v| v.abs() < 1e40);
    let mut blocks: Vec<Vec<(String, f64, f64)>> = vec![Vec::new()];
    let mut last: Option<usize> = None;
    for line in lines {
        let line = line.trim().trim_start_matches("**").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() < 3 {
            return Err(format!("malformed solution line `{line}`"));
        }
        let idx: usize = tok[0].parse().map_err(|_| format!("bad index in `{line}`"))?;
        let value: f64 = tok[2].parse().map_err(|_| format!("bad value in `{line}`"))?;
        let dual: f64 = tok.get(3).and_then(|d| d.parse().ok()).unwrap_or(0.0);
        if last.is_some_and(|l| idx <= l) {
            blocks.push(Vec::new());
        }
        last = Some(idx);
        blocks.last_mut().unwrap().push((tok[1].to_string(), value, dual));
    }
    let mut raw = RawSolution { status: Some(status), objective, ..Default::default() };
    // With all rows printed the first block holds exactly the model's rows.
    let rows_first = blocks.len() == 2
        || (blocks.len() == 1
            && !model.constraints.is_empty()
            && blocks[0].len() == model.constraints.len()
            && blocks[0].iter().zip(&model.constraints).all(|(b, c)| b.0 == c.name));
    let (rows, cols): (&[_], &[_]) = match (rows_first, blocks.len()) {
        (true, 2) => (&blocks[0], &blocks[1]),
        (true, _) => (&blocks[0], &[]),
        (false, 1) => (&[], &blocks[0]),
        _ => return Err(format!("unexpected solution layout ({} blocks)", blocks.len())),
    };
    for (name, _, dual) in rows {
        raw.duals.insert(name.clone(), *dual);
    }
    for (name, value, _) in cols {
        raw.columns.insert(name.clone(), *value);
    }
    raw.has_values = matches!(status, SolveStatus::Optimal | SolveStatus::Timeout) && objective.is_some();
    Ok(raw)
}

/// HiGHS raw solution file (`write_solution_style` 0).
pub fn parse_highs(text: &str) -> Result<RawSolution, String> {
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    let mut raw = RawSolution::default();
    let mut i = 0;
    // Which section the next `# Columns` / `# Rows` block belongs to.
    let mut dual_section = false;
    let mut primal_feasible = false;
    while i < lines.len() {
        let line = lines[i];
        if let Some(rest) = line.strip_prefix("Model status") {
            let s = rest.trim_start_matches([' ', ':']).trim();
            let s = if s.is_empty() {
                i += 1;
                lines.get(i).copied().unwrap_or("")
            } else {
                s
            };
            raw.status = Some(match s {
                "Optimal" => SolveStatus::Optimal,
                "Infeasible" => SolveStatus::Infeasible,
                s if s.starts_with("Time limit") || s.starts_with("Iteration limit") => SolveStatus::Timeout,
                _ => SolveStatus::Error,
            });
        } else if line == "# Primal solution values" {
            dual_section = false;
            primal_feasible = lines.get(i + 1).is_some_and(|l| *l != "None");
        } else if line == "# Dual solution values" {
            dual_section = true;
        } else if line.starts_with("# Basis") {
            break;
        } else if let Some(v) = line.strip_prefix("Objective") {
            raw.objective = v.trim().parse().ok();
        } else if let Some(n) = line.strip_prefix("# Columns").or_else(|| line.strip_prefix("# Rows")) {
            let is_rows = line.starts_with("# Rows");
            let n: usize = n.trim().parse().map_err(|_| format!("bad count in `{line}`"))?;
            for k in 0..n {
                let entry = lines.get(i + 1 + k).ok_or("truncated solution file")?;
                let (name, value) = entry.rsplit_once(' ').ok_or_else(|| format!("malformed line `{entry}`"))?;
                let value: f64 = value.parse().map_err(|_| format!("bad value in `{entry}`"))?;
                match (dual_section, is_rows) {
                    (false, false) => {
                        raw.columns.insert(name.trim().to_string(), value);
                    }
                    (true, true) => {
                        raw.duals.insert(name.trim().to_string(), value);
                    }
                    _ => {}
                }
            }
            i += n;
        }
        i += 1;
    }
    if raw.status.is_none() {
        return Err("no model status in solution file".into());
    }
    raw.has_values = primal_feasible && !raw.columns.is_empty();
    Ok(raw)
}
