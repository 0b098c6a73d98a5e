use super::{ConflictGraph, DimOrigin, ReduceError, ReductionKind, ReductionMap};
use crate::instance::VbpInstance;

/// Appends a dimension of capacity `limit` in which every item weighs 1.
pub fn add_cardinality(inst: &VbpInstance, limit: u32) -> Result<VbpInstance, ReduceError> {
    if limit == 0 {
        return Err(ReduceError::ZeroLimit);
    }
    Ok(inst.extend_dims(&[limit], |_| vec![1])?)
}

/// Appends an identity block: at most one copy of each item per bin.
pub fn add_binary_patterns(inst: &VbpInstance) -> Result<VbpInstance, ReduceError> {
    let m = inst.item_count();
    Ok(inst.extend_dims(&vec![1; m], |i| {
        let mut w = vec![0; m];
        w[i] = 1;
        w
    })?)
}

/// Adds degree constraints for the conflict graph over items. With `binary`
/// set, items without conflicts also get a binary dimension; conflicting
/// items are already limited to one copy by their degree dimension.
pub fn add_conflicts(
    inst: &VbpInstance,
    g: &ConflictGraph,
    binary: bool,
) -> Result<(VbpInstance, ReductionMap), ReduceError> {
    let m = inst.item_count();
    if g.vertex_count() != m {
        return Err(ReduceError::VertexCountMismatch { expected: m, found: g.vertex_count() });
    }
    let mut map = ReductionMap::plain(inst);
    let mut caps = Vec::new();
    // per new dimension: (owner item, weight of owner)
    let mut owners = Vec::new();
    for k in (0..m).filter(|&k| g.degree(k) > 0) {
        let deg = g.degree(k) as u32;
        caps.push(deg);
        owners.push((k, deg, true));
        map.dims.push(DimOrigin::Degree(k));
    }
    if binary {
        for k in (0..m).filter(|&k| g.degree(k) == 0) {
            caps.push(1);
            owners.push((k, 1, false));
            map.dims.push(DimOrigin::Binary(k));
        }
    }
    let out = inst.extend_dims(&caps, |i| {
        owners
            .iter()
            .map(|&(k, w, degree)| {
                if i == k {
                    w
                } else if degree && g.has_edge(i, k) {
                    1
                } else {
                    0
                }
            })
            .collect()
    })?;
    map.kind = if binary { ReductionKind::BinaryConflict } else { ReductionKind::Conflict };
    map.graph = Some(g.clone());
    map.binary = binary;
    Ok((out, map))
}
