//! Dense two-phase primal simplex, generic over [`Scalar`].
//!
//! Used for small master problems (column generation, restricted pattern
//! LPs). Dantzig pricing, falling back to Bland's rule after a run of
//! degenerate pivots so the method terminates in exact arithmetic.

use crate::model::Sense;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `min c·x` subject to `rows`, `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct DenseLp<S> {
    pub cost: Vec<S>,
    /// `(coefficients, sense, rhs)`, one dense coefficient vector per row.
    pub rows: Vec<(Vec<S>, Sense, S)>,
}

#[derive(Clone, Debug)]
pub struct LpResult<S> {
    pub outcome: LpOutcome,
    pub objective: S,
    pub x: Vec<S>,
    /// One dual per row, sign convention of `min` problems
    /// (non-negative on `≥` rows at optimality).
    pub duals: Vec<S>,
    pub pivots: usize,
}

const DEGENERATE_SWITCH: usize = 50;

struct Tableau<S> {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<S>>,
    /// Reduced-cost row, last entry is minus the objective.
    d: Vec<S>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        if !self.d[c].is_zero() {
            let f = self.d[c].clone();
            for (v, pv) in self.d.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Optimises the current `d` row over columns with `allowed[j]`.
    /// Returns false when unbounded.
    fn optimise(&mut self, allowed: &[bool]) -> bool {
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= DEGENERATE_SWITCH;
            let mut enter = None;
            for j in 0..self.cols {
                if !allowed[j] || !self.d[j].is_neg() {
                    continue;
                }
                match enter {
                    None => enter = Some(j),
                    Some(e) if !bland && self.d[j] < self.d[e] => enter = Some(j),
                    _ => {}
                }
                if bland {
                    break;
                }
            }
            let Some(c) = enter else { return true };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[c].is_pos() {
                    continue;
                }
                let ratio = row[self.cols].clone() / row[c].clone();
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < best.clone() - S::tolerance()
                            || (ratio.approx_eq(best) && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else { return false };
            if ratio.approx_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
    }
}

/// Solves `lp` from scratch.
pub fn solve_dense<S: Scalar>(lp: &DenseLp<S>) -> LpResult<S> {
    let n = lp.cost.len();
    let m = lp.rows.len();
    // Columns: structural, then one slack/surplus per inequality, then one
    // artificial per row.
    let n_slack = lp.rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let art0 = n + n_slack;
    let cols = art0 + m;
    let mut t = vec![vec![S::zero(); cols + 1]; m];
    let mut flipped = vec![false; m];
    let mut slack_of = vec![None; m];
    let mut s = n;
    for (i, (coef, sense, rhs)) in lp.rows.iter().enumerate() {
        debug_assert_eq!(coef.len(), n);
        let flip = rhs.is_negative();
        flipped[i] = flip;
        let sign = |v: S| if flip { -v } else { v };
        for j in 0..n {
            t[i][j] = sign(coef[j].clone());
        }
        match sense {
            Sense::Le => {
                t[i][s] = sign(S::one());
                slack_of[i] = Some(s);
                s += 1;
            }
            Sense::Ge => {
                t[i][s] = sign(-S::one());
                slack_of[i] = Some(s);
                s += 1;
            }
            Sense::Eq => {}
        }
        t[i][art0 + i] = S::one();
        t[i][cols] = sign(rhs.clone());
    }
    // Phase 1: minimise the sum of artificials.
    let mut d = vec![S::zero(); cols + 1];
    for row in &t {
        for j in 0..art0 {
            d[j] = d[j].clone() - row[j].clone();
        }
        d[cols] = d[cols].clone() - row[cols].clone();
    }
    let mut tab = Tableau { t, d, basis: (art0..cols).collect(), cols, pivots: 0 };
    let all = vec![true; cols];
    tab.optimise(&all);
    let infeasible = (-tab.d[cols].clone()).is_pos();
    if infeasible {
        return LpResult {
            outcome: LpOutcome::Infeasible,
            objective: S::zero(),
            x: vec![S::zero(); n],
            duals: vec![S::zero(); m],
            pivots: tab.pivots,
        };
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&j| !tab.t[r][j].approx_zero()) {
                tab.pivot(r, c);
            }
        }
    }
    // Phase 2.
    let mut d = vec![S::zero(); cols + 1];
    d[..n].clone_from_slice(&lp.cost);
    for (r, &b) in tab.basis.iter().enumerate() {
        let cb = if b < n { lp.cost[b].clone() } else { S::zero() };
        if cb.is_zero() {
            continue;
        }
        for j in 0..=cols {
            d[j] = d[j].clone() - cb.clone() * tab.t[r][j].clone();
        }
    }
    tab.d = d;
    let mut allowed = vec![true; cols];
    for a in allowed.iter_mut().skip(art0) {
        *a = false;
    }
    if !tab.optimise(&allowed) {
        return LpResult {
            outcome: LpOutcome::Unbounded,
            objective: S::zero(),
            x: vec![S::zero(); n],
            duals: vec![S::zero(); m],
            pivots: tab.pivots,
        };
    }
    let mut x = vec![S::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[r][cols].clone();
        }
    }
    // Artificial column of row i has cost 0 and unit entry, so its reduced
    // cost is minus the dual of the (possibly flipped) row.
    let duals = (0..m)
        .map(|i| {
            let y = -tab.d[art0 + i].clone();
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    let objective = -tab.d[cols].clone();
    LpResult { outcome: LpOutcome::Optimal, objective, x, duals, pivots: tab.pivots }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::ratio;

    fn r(v: i64) -> BigRational {
        ratio(v, 1)
    }

    /// Capacity 7, sizes 5/3/2, demands 3/1/2 over five patterns.
    #[test]
    fn small_pattern_lp_is_exact() {
        // Patterns as columns: {5}, {5,2}, {3,2,2}, {3,2}, {2,2,2}.
        let cols = [[1, 0, 0], [1, 0, 1], [0, 1, 2], [0, 1, 1], [0, 0, 3]];
        let rows = (0..3)
            .map(|i| (cols.iter().map(|c| r(c[i])).collect(), Sense::Ge, r([3, 1, 2][i])))
            .collect();
        let lp = DenseLp { cost: vec![r(1); cols.len()], rows };
        let res = solve_dense(&lp);
        assert_eq!(res.outcome, LpOutcome::Optimal);
        // Sizes 5 and 3 never share a bin: 3 + 1 bins.
        assert_eq!(res.objective, r(4));
        let dual_obj: BigRational = res.duals.iter().zip([3, 1, 2]).map(|(y, b)| y * r(b)).sum();
        assert_eq!(dual_obj, res.objective);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let lp = DenseLp {
            cost: vec![r(1)],
            rows: vec![(vec![r(1)], Sense::Le, r(1)), (vec![r(1)], Sense::Ge, r(2))],
        };
        assert_eq!(solve_dense(&lp).outcome, LpOutcome::Infeasible);
        let lp = DenseLp { cost: vec![r(-1)], rows: vec![(vec![r(1)], Sense::Ge, r(2))] };
        assert_eq!(solve_dense(&lp).outcome, LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_equalities() {
        // min x + y, -x - y <= -3, x - y = 1  →  x = 2, y = 1.
        let lp = DenseLp {
            cost: vec![r(1), r(1)],
            rows: vec![
                (vec![r(-1), r(-1)], Sense::Le, r(-3)),
                (vec![r(1), r(-1)], Sense::Eq, r(1)),
            ],
        };
        let res = solve_dense(&lp);
        assert_eq!(res.objective, r(3));
        assert_eq!(res.x, vec![r(2), r(1)]);
        assert_eq!(res.duals[0], r(-1));
    }

    proptest! {
        /// Strong duality and primal feasibility on random covering LPs,
        /// float and exact results agreeing.
        #[test]
        fn covering_lps(
            a in prop::collection::vec(prop::collection::vec(0i64..4, 5), 3),
            b in prop::collection::vec(1i64..6, 3),
        ) {
            let n = 5;
            let mut rows_q = Vec::new();
            let mut rows_f = Vec::new();
            for i in 0..3 {
                let mut coef = a[i].clone();
                coef[i] += 1; // keep every row coverable
                rows_q.push((coef.iter().map(|&v| r(v)).collect(), Sense::Ge, r(b[i])));
                rows_f.push((coef.iter().map(|&v| v as f64).collect(), Sense::Ge, b[i] as f64));
            }
            let q = solve_dense(&DenseLp { cost: vec![r(1); n], rows: rows_q.clone() });
            let f = solve_dense(&DenseLp { cost: vec![1.0; n], rows: rows_f });
            prop_assert_eq!(&q.outcome, &LpOutcome::Optimal);
            for (coef, _, rhs) in &rows_q {
                let lhs: BigRational = coef.iter().zip(&q.x).map(|(c, x)| c * x).sum();
                prop_assert!(lhs >= *rhs);
            }
            let dual: BigRational = q.duals.iter().zip(&b).map(|(y, &bi)| y * r(bi)).sum();
            prop_assert_eq!(&dual, &q.objective);
            prop_assert!(q.duals.iter().all(|y| *y >= r(0)));
            prop_assert!((f.objective - q.objective.to_f64_lossy()).abs() < 1e-9);
        }
    }
}
