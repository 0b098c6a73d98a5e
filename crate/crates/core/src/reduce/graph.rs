use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use super::ReduceError;

/// Simple undirected graph on vertices `0..n`.
///
/// Vertices are 0-based in memory and 1-based in files and messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<BTreeSet<usize>>,
}

impl ConflictGraph {
    /// Builds a graph from 0-based edges. Duplicates collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ReduceError> {
        let mut g = ConflictGraph { n, edges: BTreeSet::new(), adj: vec![BTreeSet::new(); n] };
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(ReduceError::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            if u == v {
                return Err(ReduceError::SelfLoop(u + 1));
            }
            g.edges.insert((u.min(v), u.max(v)));
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        ConflictGraph { n, edges: BTreeSet::new(), adj: vec![BTreeSet::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Parses a DIMACS `.col` graph. Repeated edges (some files list both
/// directions) are merged.
pub fn parse_dimacs_str(text: &str) -> Result<ConflictGraph, ReduceError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut tok = raw.split_whitespace();
        let bad = |message: String| ReduceError::Parse { line: line_no, message };
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                let _kind = tok.next().ok_or_else(|| bad("missing problem kind".into()))?;
                let count = tok
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| bad("missing vertex count".into()))?;
                n = Some(count);
            }
            Some("e") => {
                let count = n.ok_or_else(|| bad("edge before `p` line".into()))?;
                let mut ends = [0usize; 2];
                for end in &mut ends {
                    *end = tok
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| bad("edge needs two vertex numbers".into()))?;
                    if *end == 0 || *end > count {
                        return Err(bad(format!("vertex {} out of range 1..={count}", end)));
                    }
                }
                if ends[0] == ends[1] {
                    return Err(bad(format!("self-loop on vertex {}", ends[0])));
                }
                edges.push((ends[0] - 1, ends[1] - 1));
            }
            Some(other) if other.starts_with('c') => {}
            Some(other) => return Err(bad(format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or(ReduceError::Parse { line: 0, message: "missing `p` line".into() })?;
    if n == 0 {
        return Err(ReduceError::EmptyGraph);
    }
    ConflictGraph::new(n, edges)
}

pub fn parse_dimacs(path: impl AsRef<Path>) -> Result<ConflictGraph, ReduceError> {
    parse_dimacs_str(&std::fs::read_to_string(path)?)
}

pub fn write_dimacs(g: &ConflictGraph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// The `n × n` queen graph: squares are adjacent when a queen on one
/// attacks the other.
pub fn queen_graph(n: usize) -> ConflictGraph {
    let id = |r: usize, c: usize| r * n + c;
    let mut edges = Vec::new();
    for r1 in 0..n {
        for c1 in 0..n {
            for r2 in 0..n {
                for c2 in 0..n {
                    let (a, b) = (id(r1, c1), id(r2, c2));
                    if a >= b {
                        continue;
                    }
                    if r1 == r2 || c1 == c2 || r1.abs_diff(r2) == c1.abs_diff(c2) {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    ConflictGraph::new(n * n, edges).expect("queen graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_merges_duplicate_edges() {
        let g = parse_dimacs_str("c demo\np edge 3 4\ne 1 2\ne 2 1\ne 2 3\ne 3 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn dimacs_rejects_self_loops_and_bad_vertices() {
        assert!(parse_dimacs_str("p edge 3 1\ne 2 2\n").is_err());
        assert!(parse_dimacs_str("p edge 3 1\ne 2 4\n").is_err());
        assert!(matches!(parse_dimacs_str("p edge 0 0\n"), Err(ReduceError::EmptyGraph)));
    }

    #[test]
    fn queen_graph_edge_counts() {
        // Published edge counts of the DIMACS queen graphs.
        assert_eq!(queen_graph(5).edge_count(), 160);
        assert_eq!(queen_graph(6).edge_count(), 290);
        assert_eq!(queen_graph(7).edge_count(), 476);
        assert_eq!(queen_graph(8).edge_count(), 728);
    }

    #[test]
    fn dimacs_round_trip() {
        let g = queen_graph(4);
        assert_eq!(parse_dimacs_str(&write_dimacs(&g)).unwrap(), g);
    }
}
