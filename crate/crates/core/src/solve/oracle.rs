use std::collections::HashMap;

use super::SolveError;
use crate::flowgraph::Pattern;
use crate::instance::VbpInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// At most this many item copies per bin.
    pub cardinality: Option<u32>,
    /// At most one copy of each item per bin.
    pub binary: bool,
    /// Bound on both the number of patterns and of demand states.
    pub budget: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { cardinality: None, binary: false, budget: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub bins: usize,
    /// One item-count vector per bin, demands met exactly.
    pub packing: Vec<Pattern>,
}

/// Exact minimum number of bins by exhaustive search: every feasible
/// pattern is enumerated, then the smallest cover of the demand vector is
/// found by memoised depth-first search.
pub fn oracle_exact(inst: &VbpInstance, opts: &OracleOptions) -> Result<OracleResult, SolveError> {
    let m = inst.item_count();
    let states = inst
        .demands()
        .iter()
        .try_fold(1usize, |acc, &b| acc.checked_mul(b as usize + 1).filter(|&s| s <= opts.budget));
    if states.is_none() {
        return Err(SolveError::Budget { what: "oracle state", limit: opts.budget });
    }
    let cap: Vec<u32> = (0..m)
        .map(|i| {
            let b = inst.demand(i).min(u32::MAX as u64) as u32;
            if opts.binary {
                b.min(1)
            } else {
                b
            }
        })
        .collect();
    let mut patterns = Vec::new();
    let mut cur = vec![0u32; m];
    let mut load = vec![0u32; inst.dim_count()];
    enumerate(inst, opts, &cap, 0, 0, &mut cur, &mut load, &mut patterns)?;

    let mut search = Search { patterns: &patterns, inst, opts, memo: HashMap::new() };
    let rem = inst.demands();
    let bins = search.solve(&rem);
    let mut packing = Vec::with_capacity(bins);
    let mut rem = rem;
    while rem.iter().any(|&r| r > 0) {
        let (_, choice) = search.memo[&rem];
        let p = &patterns[choice];
        let used: Pattern = p.iter().zip(&rem).map(|(&a, &r)| (a as u64).min(r) as u32).collect();
        for (r, &u) in rem.iter_mut().zip(&used) {
            *r -= u as u64;
        }
        packing.push(used);
    }
    Ok(OracleResult { bins, packing })
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    inst: &VbpInstance,
    opts: &OracleOptions,
    cap: &[u32],
    i: usize,
    count: u32,
    cur: &mut Vec<u32>,
    load: &mut Vec<u32>,
    out: &mut Vec<Pattern>,
) -> Result<(), SolveError> {
    if i == cur.len() {
        if count > 0 {
            if out.len() >= opts.budget {
                return Err(SolveError::Budget { what: "oracle pattern", limit: opts.budget });
            }
            out.push(cur.clone());
        }
        return Ok(());
    }
    enumerate(inst, opts, cap, i + 1, count, cur, load, out)?;
    let w = inst.weights(i);
    let mut added = 0;
    while added < cap[i] {
        if opts.cardinality.is_some_and(|c| count + added + 1 > c) {
            break;
        }
        if (0..w.len()).any(|d| load[d] + w[d] > inst.capacities()[d]) {
            break;
        }
        for d in 0..w.len() {
            load[d] += w[d];
        }
        added += 1;
        cur[i] = added;
        enumerate(inst, opts, cap, i + 1, count + added, cur, load, out)?;
    }
    for d in 0..w.len() {
        load[d] -= w[d] * added;
    }
    cur[i] = 0;
    Ok(())
}

struct Search<'a> {
    patterns: &'a [Pattern],
    inst: &'a VbpInstance,
    opts: &'a OracleOptions,
    /// Remaining demand → (optimal bins, pattern used first).
    memo: HashMap<Vec<u64>, (usize, usize)>,
}

impl Search<'_> {
    fn lower_bound(&self, rem: &[u64]) -> usize {
        let mut lb = 0u64;
        for (d, &cap) in self.inst.capacities().iter().enumerate() {
            let total: u64 = rem.iter().enumerate().map(|(i, &r)| r * self.inst.weights(i)[d] as u64).sum();
            lb = lb.max(total.div_ceil(cap as u64));
        }
        if let Some(c) = self.opts.cardinality {
            lb = lb.max(rem.iter().sum::<u64>().div_ceil(c as u64));
        }
        if self.opts.binary {
            lb = lb.max(rem.iter().copied().max().unwrap_or(0));
        }
        lb as usize
    }

    fn solve(&mut self, rem: &[u64]) -> usize {
        let Some(first) = rem.iter().position(|&r| r > 0) else { return 0 };
        if let Some(&(v, _)) = self.memo.get(rem) {
            return v;
        }
        let lb = self.lower_bound(rem);
        let mut best = (usize::MAX, usize::MAX);
        let mut seen: Vec<Vec<u64>> = Vec::new();
        for (k, p) in self.patterns.iter().enumerate() {
            if p[first] == 0 {
                continue;
            }
            let next: Vec<u64> = rem.iter().zip(p).map(|(&r, &a)| r - r.min(a as u64)).collect();
            if seen.contains(&next) {
                continue;
            }
            let v = 1 + self.solve(&next);
            seen.push(next);
            if v < best.0 {
                best = (v, k);
                if v <= lb {
                    break;
                }
            }
        }
        self.memo.insert(rem.to_vec(), best);
        best.0
    }
}
