use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use crate::pipeline::{cmd_solve, Problem, ProblemSpec, RunOptions};

/// One CSV row; field order is the column order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub kind: String,
    pub m: usize,
    /// Total demand.
    pub n: u64,
    pub p: usize,
    pub nv: usize,
    pub na: usize,
    /// Vertices and arcs removed relative to Step-1, in percent.
    pub pct_v: Option<f64>,
    pub pct_a: Option<f64>,
    pub z_lp: Option<f64>,
    pub z_ip: Option<i64>,
    pub gap_class: Option<String>,
    pub t_pp: f64,
    pub t_lp: f64,
    pub t_ip: f64,
    pub t_tot: f64,
    pub n_bb: Option<u64>,
    pub status: String,
}

pub const HEADER: [&str; 18] = [
    "instance", "kind", "m", "n", "p", "nv", "na", "pct_v", "pct_a", "z_lp", "z_ip", "gap_class", "t_pp", "t_lp",
    "t_ip", "t_tot", "n_bb", "status",
];

/// Columns whose values depend on wall-clock time.
pub const TIMING_COLUMNS: [&str; 4] = ["t_pp", "t_lp", "t_ip", "t_tot"];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn fixed(v: Option<f64>, digits: usize) -> String {
    v.map(|x| format!("{x:.digits$}")).unwrap_or_default()
}

impl BenchRecord {
    pub fn new(instance: &str, kind: &str) -> Self {
        BenchRecord { instance: instance.into(), kind: kind.into(), ..Default::default() }
    }

    pub fn row(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.kind.clone(),
            self.m.to_string(),
            self.n.to_string(),
            self.p.to_string(),
            self.nv.to_string(),
            self.na.to_string(),
            fixed(self.pct_v, 2),
            fixed(self.pct_a, 2),
            fixed(self.z_lp, 6),
            opt(&self.z_ip),
            opt(&self.gap_class),
            format!("{:.3}", self.t_pp),
            format!("{:.3}", self.t_lp),
            format!("{:.3}", self.t_ip),
            format!("{:.3}", self.t_tot),
            opt(&self.n_bb),
            self.status.clone(),
        ]
    }
}

pub fn write_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in records {
        w.write_record(r.row())?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Per-dataset means of the numeric columns.
pub fn write_summary(entries: &[(String, BenchRecord)]) -> Result<String> {
    let mut groups: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for (dataset, r) in entries {
        groups.entry(dataset).or_default().push(r);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "dataset", "count", "m", "n", "p", "nv", "na", "pct_v", "pct_a", "z_lp", "z_ip", "t_pp", "t_lp", "t_ip",
        "t_tot", "n_bb",
    ])?;
    for (dataset, rs) in groups {
        let mean = |f: &dyn Fn(&BenchRecord) -> Option<f64>| {
            let vals: Vec<f64> = rs.iter().filter_map(|r| f(r)).collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        };
        let row = [
            dataset.to_string(),
            rs.len().to_string(),
            fixed(mean(&|r| Some(r.m as f64)), 2),
            fixed(mean(&|r| Some(r.n as f64)), 2),
            fixed(mean(&|r| Some(r.p as f64)), 2),
            fixed(mean(&|r| Some(r.nv as f64)), 2),
            fixed(mean(&|r| Some(r.na as f64)), 2),
            fixed(mean(&|r| r.pct_v), 2),
            fixed(mean(&|r| r.pct_a), 2),
            fixed(mean(&|r| r.z_lp), 6),
            fixed(mean(&|r| r.z_ip.map(|z| z as f64)), 2),
            fixed(mean(&|r| Some(r.t_pp)), 3),
            fixed(mean(&|r| Some(r.t_lp)), 3),
            fixed(mean(&|r| Some(r.t_ip)), 3),
            fixed(mean(&|r| Some(r.t_tot)), 3),
            fixed(mean(&|r| r.n_bb.map(|n| n as f64)), 2),
        ];
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub spec: ProblemSpec,
    pub dataset: String,
}

/// One instance per line: `PATH KIND [mode=M] [card=C] [binary]
/// [conflicts=FILE] [dataset=NAME]`. Relative paths are taken from the
/// manifest's directory; `#` starts a comment.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ctx = || format!("manifest line {}", no + 1);
        let mut tok = line.split_whitespace();
        let path = base.join(tok.next().expect("non-empty line"));
        let problem: Problem = tok
            .next()
            .with_context(|| format!("{}: missing problem kind", ctx()))?
            .parse()
            .map_err(anyhow::Error::msg)
            .with_context(ctx)?;
        let mut spec = ProblemSpec::new(problem);
        let mut dataset = problem.to_string();
        for t in tok {
            match t.split_once('=') {
                Some(("mode", v)) => spec.mode = v.parse().map_err(anyhow::Error::msg).with_context(ctx)?,
                Some(("card", v)) => spec.card = Some(v.parse().with_context(ctx)?),
                Some(("conflicts", v)) => spec.conflicts = Some(base.join(v)),
                Some(("dataset", v)) => dataset = v.to_string(),
                None if t == "binary" => spec.binary = true,
                _ => bail!("{}: unknown option `{t}`", ctx()),
            }
        }
        out.push(ManifestEntry { path, spec, dataset });
    }
    Ok(out)
}

pub struct BenchOutput {
    /// `(dataset, record)`, sorted by instance name then kind.
    pub records: Vec<(String, BenchRecord)>,
    pub csv: String,
    pub summary: String,
    pub failures: usize,
}

/// Runs every manifest entry on `jobs` worker threads. Failed instances
/// become rows with an `error` status.
pub fn cmd_bench(manifest: &Path, opts: &RunOptions, jobs: usize) -> Result<BenchOutput> {
    let text = std::fs::read_to_string(manifest).with_context(|| format!("read {}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let mut records: Vec<(String, BenchRecord)> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let mut opts = opts.clone();
                if let Some(dir) = &opts.out_dir {
                    // Each instance gets its own directory.
                    opts.out_dir = Some(dir.join(format!("{}-{}", e.dataset, e.spec.kind().replace('/', "_"))));
                }
                let record = match cmd_solve(&e.path, &e.spec, &opts) {
                    Ok(o) => o.record,
                    Err(err) => {
                        log::warn!("{}: {err:#}", e.path.display());
                        let name = e.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                        let mut r = BenchRecord::new(&name, &e.spec.kind());
                        r.status = "error".into();
                        r
                    }
                };
                (e.dataset.clone(), record)
            })
            .collect()
    });
    records.sort_by(|a, b| (&a.1.instance, &a.1.kind, &a.0).cmp(&(&b.1.instance, &b.1.kind, &b.0)));
    let failures = records.iter().filter(|(_, r)| r.status != "optimal").count();
    let plain: Vec<BenchRecord> = records.iter().map(|(_, r)| r.clone()).collect();
    Ok(BenchOutput { csv: write_csv(&plain)?, summary: write_summary(&records)?, records, failures })
}
