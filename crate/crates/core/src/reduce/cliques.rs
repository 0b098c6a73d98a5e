use std::collections::BTreeSet;

use super::ConflictGraph;

/// All maximal cliques, by Bron–Kerbosch with pivoting.
///
/// Each clique is sorted; the list is sorted. Isolated vertices come back as
/// singleton cliques.
pub fn maximal_cliques(g: &ConflictGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let p: BTreeSet<usize> = (0..g.vertex_count()).collect();
    let mut r = Vec::new();
    expand(g, &mut r, p, BTreeSet::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn expand(
    g: &ConflictGraph,
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| (p.intersection(g.neighbors(u)).count(), std::cmp::Reverse(u)))
        .expect("p is non-empty");
    let candidates: Vec<usize> = p.difference(g.neighbors(pivot)).copied().collect();
    for v in candidates {
        let nv = g.neighbors(v);
        r.push(v);
        expand(
            g,
            r,
            p.intersection(nv).copied().collect(),
            x.intersection(nv).copied().collect(),
            out,
        );
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

/// Maximal cliques chosen greedily until every edge and every isolated
/// vertex is covered. Each step takes the clique covering the most
/// uncovered edges; ties go to the first clique in sorted order.
pub fn clique_edge_cover(g: &ConflictGraph) -> Vec<Vec<usize>> {
    let all = maximal_cliques(g);
    let mut uncovered: BTreeSet<(usize, usize)> = g.edges().collect();
    let mut chosen = Vec::new();
    let mut used = vec![false; all.len()];
    while !uncovered.is_empty() {
        let gain = |c: &Vec<usize>| {
            let mut k = 0;
            for (a, &u) in c.iter().enumerate() {
                for &v in &c[a + 1..] {
                    if uncovered.contains(&(u, v)) {
                        k += 1;
                    }
                }
            }
            k
        };
        let (best, _) = all
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, c)| (i, gain(c)))
            .fold((usize::MAX, 0), |acc, (i, k)| if k > acc.1 { (i, k) } else { acc });
        let clique = &all[best];
        for (a, &u) in clique.iter().enumerate() {
            for &v in &clique[a + 1..] {
                uncovered.remove(&(u, v));
            }
        }
        used[best] = true;
        chosen.push(clique.clone());
    }
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            chosen.push(vec![v]);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::queen_graph;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> ConflictGraph {
        ConflictGraph::new(n, edges.iter().map(|&(u, v)| (u - 1, v - 1))).unwrap()
    }

    #[test]
    fn triangle_is_one_clique() {
        assert_eq!(maximal_cliques(&graph(3, &[(1, 2), (2, 3), (1, 3)])), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path_gives_two_edges() {
        assert_eq!(maximal_cliques(&graph(3, &[(1, 2), (2, 3)])), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn four_vertex_example() {
        let g = graph(4, &[(1, 2), (1, 3), (2, 3), (3, 4)]);
        assert_eq!(maximal_cliques(&g), vec![vec![0, 1, 2], vec![2, 3]]);
        assert_eq!(clique_edge_cover(&g), vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn isolated_vertices_are_covered() {
        let g = graph(3, &[(1, 2)]);
        assert_eq!(clique_edge_cover(&g), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn queen_rows_columns_and_diagonals_are_cliques() {
        let cover = clique_edge_cover(&queen_graph(5));
        assert!(cover.iter().any(|c| c == &vec![0, 1, 2, 3, 4]));
    }

    fn brute_is_clique(g: &ConflictGraph, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(a, &u)| set[a + 1..].iter().all(|&v| g.has_edge(u, v)))
    }

    proptest! {
        #[test]
        fn cliques_are_maximal_and_cover_edges(
            n in 1usize..=9,
            raw in proptest::collection::vec((0usize..9, 0usize..9), 0..20),
        ) {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
            let g = ConflictGraph::new(n, edges).unwrap();
            let all = maximal_cliques(&g);
            for c in &all {
                prop_assert!(brute_is_clique(&g, c));
                for w in 0..n {
                    if !c.contains(&w) {
                        let mut bigger = c.clone();
                        bigger.push(w);
                        prop_assert!(!brute_is_clique(&g, &bigger));
                    }
                }
            }
            // Every maximal clique of the brute-force enumeration is found.
            let mut brute = Vec::new();
            for mask in 1u32..(1 << n) {
                let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                if brute_is_clique(&g, &set)
                    && (0..n).all(|w| set.contains(&w) || !brute_is_clique(&g, &[set.clone(), vec![w]].concat()))
                {
                    brute.push(set);
                }
            }
            brute.sort();
            prop_assert_eq!(&all, &brute);
            let cover = clique_edge_cover(&g);
            for (u, v) in g.edges() {
                prop_assert!(cover.iter().any(|c| c.contains(&u) && c.contains(&v)));
            }
        }
    }
}
