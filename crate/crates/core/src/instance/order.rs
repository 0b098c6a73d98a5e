use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::VbpInstance;

/// Items ranked by decreasing normalized weight sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalOrder {
    /// `permutation[rank]` is the original index of the item at that rank.
    pub permutation: Vec<usize>,
    /// `alpha[i]` is the score of original item `i`.
    pub alpha: Vec<BigRational>,
    /// Inverse of `permutation`.
    pub rank: Vec<usize>,
}

impl CanonicalOrder {
    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }
}

/// `Σ_d w^d / W^d` as an exact rational.
pub fn alpha(weights: &[u32], capacities: &[u32]) -> BigRational {
    weights.iter().zip(capacities).fold(BigRational::zero(), |acc, (&w, &cap)| {
        acc + BigRational::new(BigInt::from(w), BigInt::from(cap))
    })
}

/// Ranks items by decreasing alpha, then by decreasing lexicographic weight
/// vector. Remaining ties keep the input order.
pub fn canonical_order(inst: &VbpInstance) -> CanonicalOrder {
    let alpha: Vec<BigRational> =
        inst.items().iter().map(|it| self::alpha(&it.weights, inst.capacities())).collect();
    let mut permutation: Vec<usize> = (0..inst.item_count()).collect();
    permutation.sort_by(|&a, &b| match alpha[b].cmp(&alpha[a]) {
        Ordering::Equal => inst.weights(b).cmp(inst.weights(a)),
        other => other,
    });
    let mut rank = vec![0; permutation.len()];
    for (r, &i) in permutation.iter().enumerate() {
        rank[i] = r;
    }
    CanonicalOrder { permutation, alpha, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{fixtures, ItemType};
    use proptest::prelude::*;

    #[test]
    fn example1_order_is_by_size() {
        let ord = canonical_order(&fixtures::example1());
        assert_eq!(ord.permutation, vec![0, 1, 2]);
        assert_eq!(ord.alpha[0], BigRational::new(5.into(), 7.into()));
    }

    #[test]
    fn ties_fall_back_to_lexicographic_then_input_order() {
        let items = vec![
            ItemType::new(vec![2, 6], 1, "b"),
            ItemType::new(vec![6, 2], 1, "a"),
            ItemType::new(vec![2, 6], 1, "b2"),
        ];
        let inst = VbpInstance::new(vec![10, 10], items).unwrap();
        assert_eq!(canonical_order(&inst).permutation, vec![1, 0, 2]);
    }

    #[test]
    fn identical_items_keep_relative_order() {
        let inst = VbpInstance::one_dimensional(10, &[(3, 1), (3, 2), (3, 4)]).unwrap();
        assert_eq!(canonical_order(&inst).permutation, vec![0, 1, 2]);
    }

    fn arb_instance() -> impl Strategy<Value = VbpInstance> {
        (1usize..=3, 1u32..=20).prop_flat_map(|(p, cap)| {
            let item = (proptest::collection::vec(1u32..=cap, p), 1u64..=4);
            proptest::collection::vec(item, 1..=8).prop_map(move |raw| {
                let items = raw
                    .into_iter()
                    .enumerate()
                    .map(|(i, (w, b))| ItemType::new(w, b, i.to_string()))
                    .collect();
                VbpInstance::new(vec![cap; p], items).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn alpha_is_non_increasing_and_order_is_idempotent(inst in arb_instance()) {
            let ord = canonical_order(&inst);
            for pair in ord.permutation.windows(2) {
                prop_assert!(ord.alpha[pair[0]] >= ord.alpha[pair[1]]);
            }
            let mut reordered = inst.items().to_vec();
            for (r, &i) in ord.permutation.iter().enumerate() {
                reordered[r] = inst.item(i).clone();
            }
            let again = VbpInstance::new(inst.capacities().to_vec(), reordered).unwrap();
            let ord2 = canonical_order(&again);
            prop_assert_eq!(ord2.permutation, (0..inst.item_count()).collect::<Vec<_>>());
        }
    }
}
