use num_traits::FromPrimitive;

use super::simplex::{solve_dense, DenseLp, LpOutcome, LpResult};
use super::SolveError;
use crate::flowgraph::{price_min_reduced_cost, ArcFlowGraph, Pattern};
use crate::instance::VbpInstance;
use crate::model::Sense;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ColGenConfig {
    pub max_iterations: usize,
    /// A column enters while its reduced cost is below `-threshold`.
    pub threshold: f64,
}

impl Default for ColGenConfig {
    fn default() -> Self {
        ColGenConfig { max_iterations: 100_000, threshold: 1e-9 }
    }
}

#[derive(Clone, Debug)]
pub struct ColGenResult<S> {
    pub z_lp: S,
    /// Master solves performed.
    pub iterations: usize,
    /// Final master columns with positive value.
    pub solution: Vec<(Pattern, S)>,
    pub columns: usize,
}

/// Pattern LP `min Σ λ_p` s.t. `Σ_p a_ip λ_p ≥ b_i` over the given columns.
pub fn pattern_lp<S: Scalar>(inst: &VbpInstance, patterns: &[Pattern]) -> LpResult<S> {
    let rows = (0..inst.item_count())
        .map(|i| {
            let coef = patterns.iter().map(|p| <S as Scalar>::from_u64(p[i] as u64)).collect();
            (coef, Sense::Ge, <S as Scalar>::from_u64(inst.demand(i)))
        })
        .collect();
    solve_dense(&DenseLp { cost: vec![S::one(); patterns.len()], rows })
}

/// Column generation on the pattern formulation, pricing by longest path
/// over `g`. The master starts from the single-item patterns.
pub fn column_generation_lp<S: Scalar>(
    inst: &VbpInstance,
    g: &ArcFlowGraph,
    cfg: &ColGenConfig,
) -> Result<ColGenResult<S>, SolveError> {
    let m = inst.item_count();
    let mut columns: Vec<Pattern> = (0..m)
        .map(|i| {
            let mut p = vec![0; m];
            p[i] = 1;
            p
        })
        .collect();
    let threshold = <S as FromPrimitive>::from_f64(cfg.threshold).unwrap_or_else(S::zero);
    for it in 1..=cfg.max_iterations {
        let res = pattern_lp::<S>(inst, &columns);
        match res.outcome {
            LpOutcome::Optimal => {}
            LpOutcome::Infeasible => return Err(SolveError::Master("infeasible")),
            LpOutcome::Unbounded => return Err(SolveError::Master("unbounded")),
        }
        let priced = price_min_reduced_cost(g, &res.duals);
        let improving = priced.reduced_cost < -threshold.clone() && !columns.contains(&priced.pattern);
        log::trace!("colgen iteration {it}: z = {}, reduced cost {}", res.objective, priced.reduced_cost);
        if !improving {
            let solution = columns
                .iter()
                .zip(&res.x)
                .filter(|(_, x)| x.is_pos())
                .map(|(p, x)| (p.clone(), x.clone()))
                .collect();
            return Ok(ColGenResult { z_lp: res.objective, iterations: it, solution, columns: columns.len() });
        }
        columns.push(priced.pattern);
    }
    Err(SolveError::Iterations(cfg.max_iterations))
}
