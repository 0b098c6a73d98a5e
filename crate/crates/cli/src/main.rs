use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use arcflow::flowgraph::DEFAULT_STATE_BUDGET;
use arcflow::instance::{write_instance, InstanceFormat};
use arcflow::model::ModelFormat;
use arcflow::reduce::{queen_graph, write_dimacs, write_timetable, ColoringMode};
use arcflow::solve::{SolutionFormat, SolverConfig};
use arcflow_cli::bench::write_csv;
use arcflow_cli::{cmd_bench, cmd_graph_stats, cmd_solve, gen_divisible, gen_timetable, hdtt4, Problem, ProblemSpec, RunOptions};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arcflow", version, about = "Arc-flow models for vector packing and its relatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and validate the decoded packing.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Cross-check the optimum with the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
        /// Also build the step-by-step graphs to report compression.
        #[arg(long)]
        reference_pipeline: bool,
        /// Append the result row to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print node and arc counts of the graphs built for an instance.
    GraphStats {
        instance: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        reference_pipeline: bool,
        /// Limit on construction states and Step-1 nodes.
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    /// Run every instance of a manifest and write a CSV table.
    Bench {
        manifest: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Worker threads (instances solved concurrently).
        #[arg(long, short = 'j', default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        reference_pipeline: bool,
        /// Output CSV; stdout when absent.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        /// Per-dataset means.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Random instance whose item sizes divide the capacity.
    GenDivisible {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'm', default_value_t = 10)]
        items: usize,
        #[arg(long = "capacity", short = 'W', default_value_t = 60)]
        capacity: u32,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Random timetable that fits a known number of periods.
    GenTimetable {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Classes, teachers and venues.
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 30)]
        periods: usize,
        /// The bundled hdtt4 stand-in.
        #[arg(long, conflicts_with_all = ["seed", "size", "periods"])]
        hdtt4: bool,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// n×n queen graph in DIMACS format.
    GenQueen {
        n: usize,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ProblemKind {
    #[arg(long)]
    vbp: bool,
    #[arg(long)]
    bpp: bool,
    #[arg(long)]
    csp: bool,
    /// DIMACS graph to color.
    #[arg(long)]
    color: bool,
    #[arg(long)]
    timetable: bool,
}

#[derive(Args)]
struct ProblemArgs {
    #[command(flatten)]
    kind: ProblemKind,
    /// Coloring reduction.
    #[arg(long, default_value = "degree")]
    mode: ColoringMode,
    /// At most C items per bin.
    #[arg(long, value_name = "C")]
    card: Option<u32>,
    /// At most one copy of each item per bin.
    #[arg(long)]
    binary: bool,
    /// DIMACS graph of items that may not share a bin.
    #[arg(long, value_name = "FILE")]
    conflicts: Option<PathBuf>,
}

impl ProblemArgs {
    fn spec(&self) -> ProblemSpec {
        let k = &self.kind;
        let problem = if k.bpp {
            Problem::Bpp
        } else if k.csp {
            Problem::Csp
        } else if k.color {
            Problem::Color
        } else if k.timetable {
            Problem::Timetable
        } else {
            Problem::Vbp
        };
        ProblemSpec {
            problem,
            mode: self.mode,
            card: self.card,
            binary: self.binary,
            conflicts: self.conflicts.clone(),
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// Command template with {model} {solution} {time_limit} {threads}
    /// {abs_gap} {rel_gap} placeholders. Found automatically when absent.
    #[arg(long, env = "ARCFLOW_SOLVER_CMD")]
    solver_cmd: Option<String>,
    /// Solution file dialect of --solver-cmd (cbc or highs).
    #[arg(long, env = "ARCFLOW_SOLVER_FORMAT")]
    solver_format: Option<SolutionFormat>,
    /// Seconds per solver call.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Model file format handed to the solver.
    #[arg(long, default_value = "lp")]
    format: ModelFormat,
    /// Accept a feasible but unproven solution when a time limit is set.
    #[arg(long)]
    accept_feasible: bool,
    /// Keep model, annotation and solution files here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl SolverArgs {
    fn options(&self, reference_pipeline: bool) -> Result<RunOptions> {
        let mut cfg = match &self.solver_cmd {
            Some(cmd) => match self.solver_format {
                Some(f) => SolverConfig::new(cmd.clone(), f),
                None => SolverConfig::from_template(cmd),
            },
            None => SolverConfig::discover()?,
        };
        if let Some(t) = self.time_limit {
            anyhow::ensure!(t > 0.0, "time limit must be positive");
            cfg.time_limit = t;
        }
        cfg.threads = self.threads;
        cfg.model_format = self.format;
        let mut opts = RunOptions::new(cfg);
        opts.time_limited = self.time_limit.is_some();
        opts.accept_feasible = self.accept_feasible;
        opts.reference_pipeline = reference_pipeline;
        opts.out_dir = self.out_dir.clone();
        Ok(opts)
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { instance, problem, solver, oracle, reference_pipeline, csv } => {
            let mut opts = solver.options(reference_pipeline)?;
            opts.oracle = oracle;
            let out = cmd_solve(&instance, &problem.spec(), &opts)?;
            if let Some(text) = &out.solution_text {
                print!("{text}");
            }
            if let Some(pretty) = &out.pretty {
                print!("{pretty}");
            }
            if let Some(report) = &out.report {
                eprintln!("validation: {report}");
            }
            let r = &out.record;
            eprintln!(
                "status {} z_ip {} z_lp {} nodes {} arcs {} t_tot {:.3}s",
                r.status,
                r.z_ip.map_or("-".into(), |z| z.to_string()),
                r.z_lp.map_or("-".into(), |z| format!("{z:.6}")),
                r.nv,
                r.na,
                r.t_tot
            );
            if let Some(path) = csv {
                let text = write_csv(std::slice::from_ref(&out.record))?;
                let exists = path.exists();
                let mut f = std::fs::OpenOptions::new().create(true).append(true).open(&path)?;
                let body = if exists { text.lines().skip(1).map(|l| format!("{l}\n")).collect() } else { text };
                f.write_all(body.as_bytes())?;
            }
            Ok(out.success)
        }
        Command::GraphStats { instance, problem, reference_pipeline, budget } => {
            let stats = cmd_graph_stats(&instance, &problem.spec(), reference_pipeline, budget)?;
            print!("{}", stats.render());
            Ok(true)
        }
        Command::Bench { manifest, solver, jobs, reference_pipeline, output, summary } => {
            let opts = solver.options(reference_pipeline)?;
            let out = cmd_bench(&manifest, &opts, jobs)?;
            emit(output.as_deref(), &out.csv)?;
            if let Some(p) = summary {
                emit(Some(&p), &out.summary)?;
            }
            if out.failures > 0 {
                log::warn!("{} of {} instances did not finish optimal", out.failures, out.records.len());
            }
            Ok(true)
        }
        Command::GenDivisible { seed, items, capacity, output } => {
            anyhow::ensure!(capacity >= 2, "capacity must be at least 2");
            let inst = gen_divisible(seed, items, capacity);
            emit(output.as_deref(), &write_instance(&inst, InstanceFormat::Bpp)?)?;
            Ok(true)
        }
        Command::GenTimetable { seed, size, periods, hdtt4: fixed, output } => {
            let tt = if fixed { hdtt4() } else { gen_timetable(seed, size, periods) };
            emit(output.as_deref(), &write_timetable(&tt))?;
            Ok(true)
        }
        Command::GenQueen { n, output } => {
            anyhow::ensure!(n >= 1, "board size must be positive");
            emit(output.as_deref(), &write_dimacs(&queen_graph(n)))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
