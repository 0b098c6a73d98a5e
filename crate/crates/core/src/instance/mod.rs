//! Vector packing instances.
//!
//! Every problem variant handled by the crate is expressed as a
//! [`VbpInstance`]: `m` item types with `p`-dimensional integer weights,
//! a demand per type and one capacity per dimension.

mod io;
mod order;

use std::collections::BTreeSet;

pub use io::{parse_instance, parse_instance_str, write_instance, InstanceFormat};
pub use order::{canonical_order, CanonicalOrder};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("item {item}: weight {weight} exceeds capacity {capacity} in dimension {dim}")]
    ItemTooWide { item: String, dim: usize, weight: u32, capacity: u32 },
    #[error("item {item}: all weights are zero")]
    ZeroWeight { item: String },
    #[error("item {item}: demand must be at least 1")]
    ZeroDemand { item: String },
    #[error("item {item}: expected {expected} weights, found {found}")]
    DimensionMismatch { item: String, expected: usize, found: usize },
    #[error("capacity of dimension {0} must be positive")]
    ZeroCapacity(usize),
    #[error("instance has no dimensions")]
    NoDimensions,
    #[error("instance has no items")]
    NoItems,
    #[error("exact-demand set references item {0}, which does not exist")]
    BadExactSet(usize),
    #[error("demand of item {item} overflows when multiplied by {factor}")]
    DemandOverflow { item: String, factor: u64 },
    #[error("scaling factor must be positive")]
    ZeroFactor,
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One item type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ItemType {
    pub weights: Vec<u32>,
    pub demand: u64,
    /// Tag carried through reductions and solution output.
    pub external_id: String,
}

impl ItemType {
    pub fn new(weights: Vec<u32>, demand: u64, external_id: impl Into<String>) -> Self {
        ItemType { weights, demand, external_id: external_id.into() }
    }
}

/// A validated `p`-dimensional vector packing instance.
///
/// Immutable once built; the constructors check every invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VbpInstance {
    capacities: Vec<u32>,
    items: Vec<ItemType>,
    exact: BTreeSet<usize>,
}

impl VbpInstance {
    /// Builds an instance with the default exact-demand set
    /// (items whose demand is one).
    pub fn new(capacities: Vec<u32>, items: Vec<ItemType>) -> Result<Self, InstanceError> {
        let exact = default_exact_set(&items);
        Self::with_exact_set(capacities, items, exact)
    }

    pub fn with_exact_set(
        capacities: Vec<u32>,
        items: Vec<ItemType>,
        exact: BTreeSet<usize>,
    ) -> Result<Self, InstanceError> {
        if capacities.is_empty() {
            return Err(InstanceError::NoDimensions);
        }
        if let Some(d) = capacities.iter().position(|&c| c == 0) {
            return Err(InstanceError::ZeroCapacity(d));
        }
        if items.is_empty() {
            return Err(InstanceError::NoItems);
        }
        for item in &items {
            if item.weights.len() != capacities.len() {
                return Err(InstanceError::DimensionMismatch {
                    item: item.external_id.clone(),
                    expected: capacities.len(),
                    found: item.weights.len(),
                });
            }
            if item.demand == 0 {
                return Err(InstanceError::ZeroDemand { item: item.external_id.clone() });
            }
            if item.weights.iter().all(|&w| w == 0) {
                return Err(InstanceError::ZeroWeight { item: item.external_id.clone() });
            }
            for (d, (&w, &cap)) in item.weights.iter().zip(&capacities).enumerate() {
                if w > cap {
                    return Err(InstanceError::ItemTooWide {
                        item: item.external_id.clone(),
                        dim: d,
                        weight: w,
                        capacity: cap,
                    });
                }
            }
        }
        if let Some(&bad) = exact.iter().find(|&&i| i >= items.len()) {
            return Err(InstanceError::BadExactSet(bad));
        }
        Ok(VbpInstance { capacities, items, exact })
    }

    /// Convenience constructor for one-dimensional instances from
    /// `(weight, demand)` pairs. Item ids are 1-based positions.
    pub fn one_dimensional(capacity: u32, items: &[(u32, u64)]) -> Result<Self, InstanceError> {
        let items = items
            .iter()
            .enumerate()
            .map(|(i, &(w, b))| ItemType::new(vec![w], b, (i + 1).to_string()))
            .collect();
        Self::new(vec![capacity], items)
    }

    pub fn dim_count(&self) -> usize {
        self.capacities.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn items(&self) -> &[ItemType] {
        &self.items
    }

    pub fn item(&self, i: usize) -> &ItemType {
        &self.items[i]
    }

    pub fn weights(&self, i: usize) -> &[u32] {
        &self.items[i].weights
    }

    pub fn demand(&self, i: usize) -> u64 {
        self.items[i].demand
    }

    pub fn demands(&self) -> Vec<u64> {
        self.items.iter().map(|it| it.demand).collect()
    }

    /// Total number of item copies.
    pub fn total_demand(&self) -> u64 {
        self.items.iter().map(|it| it.demand).sum()
    }

    /// Items whose demand row is an equality.
    pub fn exact_set(&self) -> &BTreeSet<usize> {
        &self.exact
    }

    pub fn is_exact(&self, i: usize) -> bool {
        self.exact.contains(&i)
    }

    /// Replaces the exact-demand set.
    pub fn set_exact(self, exact: BTreeSet<usize>) -> Result<Self, InstanceError> {
        Self::with_exact_set(self.capacities, self.items, exact)
    }

    /// Multiplies every demand by `factor`; the exact-demand set is recomputed
    /// with the default rule.
    pub fn scale_demands(&self, factor: u64) -> Result<Self, InstanceError> {
        if factor == 0 {
            return Err(InstanceError::ZeroFactor);
        }
        let mut items = self.items.clone();
        for item in &mut items {
            item.demand = item.demand.checked_mul(factor).ok_or_else(|| {
                InstanceError::DemandOverflow { item: item.external_id.clone(), factor }
            })?;
        }
        Self::new(self.capacities.clone(), items)
    }

    /// Appends dimensions. `weight_of(i)` yields the new weights of item `i`.
    pub(crate) fn extend_dims(
        &self,
        new_caps: &[u32],
        mut weight_of: impl FnMut(usize) -> Vec<u32>,
    ) -> Result<Self, InstanceError> {
        let mut caps = self.capacities.clone();
        caps.extend_from_slice(new_caps);
        let items = self
            .items
            .iter()
            .enumerate()
            .map(|(i, it)| {
                let mut w = it.weights.clone();
                let extra = weight_of(i);
                debug_assert_eq!(extra.len(), new_caps.len());
                w.extend(extra);
                ItemType { weights: w, ..it.clone() }
            })
            .collect();
        Self::with_exact_set(caps, items, self.exact.clone())
    }

    /// Whether `counts[i]` copies of each item fit one bin.
    pub fn pattern_fits(&self, counts: &[u32]) -> bool {
        (0..self.dim_count()).all(|d| {
            let load: u64 = counts
                .iter()
                .zip(&self.items)
                .map(|(&c, it)| c as u64 * it.weights[d] as u64)
                .sum();
            load <= self.capacities[d] as u64
        })
    }
}

fn default_exact_set(items: &[ItemType]) -> BTreeSet<usize> {
    items.iter().enumerate().filter(|(_, it)| it.demand == 1).map(|(i, _)| i).collect()
}
