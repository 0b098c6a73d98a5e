use super::{MilpModel, Sense};
use crate::instance::{canonical_order, VbpInstance};

/// First fit over item copies in canonical order. Returns per-bin item counts.
pub fn first_fit_decreasing(inst: &VbpInstance) -> Vec<Vec<u32>> {
    let p = inst.dim_count();
    let m = inst.item_count();
    let mut loads: Vec<Vec<u32>> = Vec::new();
    let mut bins: Vec<Vec<u32>> = Vec::new();
    for &i in &canonical_order(inst).permutation {
        let w = inst.weights(i);
        for _ in 0..inst.demand(i) {
            let fits = |load: &Vec<u32>| (0..p).all(|d| load[d] + w[d] <= inst.capacities()[d]);
            let k = match loads.iter().position(fits) {
                Some(k) => k,
                None => {
                    loads.push(vec![0; p]);
                    bins.push(vec![0; m]);
                    loads.len() - 1
                }
            };
            for d in 0..p {
                loads[k][d] += w[d];
            }
            bins[k][i] += 1;
        }
    }
    bins
}

/// Assignment model over `k` bins: `y_k` opens bin `k`, `x_ik` copies of
/// item `i` go to bin `k`. Demand rows `Σ_k x_ik ≥ b_i`; one knapsack row
/// per bin and dimension. `k = None` uses the first-fit-decreasing count.
pub fn build_assignment_model(inst: &VbpInstance, k: Option<usize>) -> MilpModel {
    let k = k.unwrap_or_else(|| first_fit_decreasing(inst).len()).max(1);
    let m = inst.item_count();
    let mut model = MilpModel::new("assignment");
    let y: Vec<usize> = (0..k).map(|b| model.add_var(format!("Y{}", b + 1), 0, Some(1), true)).collect();
    let x: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..k)
                .map(|b| model.add_var(format!("X{}_{}", i + 1, b + 1), 0, Some(inst.demand(i) as i64), true))
                .collect()
        })
        .collect();
    model.objective = y.iter().map(|&v| (v, 1)).collect();
    for i in 0..m {
        model.add_constraint(
            format!("D{}", i + 1),
            x[i].iter().map(|&v| (v, 1)).collect(),
            Sense::Ge,
            inst.demand(i) as i64,
        );
    }
    for b in 0..k {
        for d in 0..inst.dim_count() {
            let mut terms: Vec<(usize, i64)> = (0..m)
                .filter(|&i| inst.weights(i)[d] > 0)
                .map(|i| (x[i][b], inst.weights(i)[d] as i64))
                .collect();
            terms.push((y[b], -(inst.capacities()[d] as i64)));
            model.add_constraint(format!("K{}_{}", b + 1, d + 1), terms, Sense::Le, 0);
        }
    }
    model
}
