//! Command implementations behind the `arcflow` binary.

pub mod bench;
pub mod gen;
pub mod pipeline;
pub mod stats;

pub use bench::{cmd_bench, parse_manifest, BenchRecord, ManifestEntry};
pub use gen::{gen_divisible, gen_timetable, hdtt4};
pub use pipeline::{cmd_solve, load_problem, Problem, ProblemSpec, RunOptions, SolveOutcome};
pub use stats::cmd_graph_stats;
