use std::collections::HashMap;

use crate::instance::{CanonicalOrder, VbpInstance};

/// Fixed-size bitset over `0..=len-1`.
#[derive(Clone, Debug)]
struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn singleton_zero(len: usize) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        words[0] = 1;
        Bits { words, len }
    }

    /// `self |= self << shift`, truncated to `len` bits.
    fn or_shifted(&mut self, shift: usize) {
        if shift >= self.len {
            return;
        }
        let (ws, bs) = (shift / 64, shift % 64);
        for k in (ws..self.words.len()).rev() {
            let mut v = self.words[k - ws] << bs;
            if bs > 0 && k > ws {
                v |= self.words[k - ws - 1] >> (64 - bs);
            }
            self.words[k] |= v;
        }
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX >> extra;
        }
    }

    /// Largest member not above `r`. Zero is always a member.
    fn max_below(&self, r: usize) -> usize {
        let r = r.min(self.len - 1);
        let mut k = r / 64;
        let mut mask = if r % 64 == 63 { u64::MAX } else { (1u64 << (r % 64 + 1)) - 1 };
        loop {
            let v = self.words[k] & mask;
            if v != 0 {
                return k * 64 + 63 - v.leading_zeros() as usize;
            }
            if k == 0 {
                return 0;
            }
            k -= 1;
            mask = u64::MAX;
        }
    }
}

/// Per-dimension state lifting ("highest position").
///
/// For a state `(x, i, c)` and each dimension `d`, returns `W^d` minus the
/// largest load that items of rank `i..` can still add without exceeding
/// `W^d − x^d`, where item `i` may be used `b_i − c` more times.
pub struct Lifter {
    caps: Vec<u32>,
    /// `w[d][rank]`
    w: Vec<Vec<u32>>,
    b: Vec<u64>,
    /// `suffix[d][k]`: loads reachable with items of rank `k..`.
    suffix: Vec<Vec<Bits>>,
    memo: HashMap<(usize, u32, usize, u64), u32>,
}

impl Lifter {
    pub fn new(inst: &VbpInstance, order: &CanonicalOrder) -> Self {
        let p = inst.dim_count();
        let m = inst.item_count();
        let caps = inst.capacities().to_vec();
        let w: Vec<Vec<u32>> =
            (0..p).map(|d| order.permutation.iter().map(|&i| inst.weights(i)[d]).collect()).collect();
        let b: Vec<u64> = order.permutation.iter().map(|&i| inst.demand(i)).collect();
        let suffix = (0..p)
            .map(|d| {
                let len = caps[d] as usize + 1;
                let mut sets = vec![Bits::singleton_zero(len); m + 1];
                for k in (0..m).rev() {
                    let mut cur = sets[k + 1].clone();
                    add_bounded(&mut cur, w[d][k], b[k], caps[d]);
                    sets[k] = cur;
                }
                sets
            })
            .collect();
        Lifter { caps, w, b, suffix, memo: HashMap::new() }
    }

    pub fn lift(&mut self, x: &[u32], i: usize, c: u64) -> Vec<u32> {
        (0..x.len()).map(|d| self.highest_position(d, x[d], i, c)).collect()
    }

    pub fn highest_position(&mut self, d: usize, xd: u32, i: usize, c: u64) -> u32 {
        let cap = self.caps[d];
        let r = cap - xd;
        let w = self.w[d][i];
        let left = self.b[i].saturating_sub(c);
        let tmax = if w == 0 { 0 } else { left.min((r / w) as u64) };
        let key = (d, r, i, tmax);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let rest = &self.suffix[d][i + 1];
        let mut best = 0usize;
        for t in 0..=tmax {
            let used = (t as u32 * w) as usize;
            best = best.max(used + rest.max_below(r as usize - used));
            if best == r as usize {
                break;
            }
        }
        let v = cap - best as u32;
        self.memo.insert(key, v);
        v
    }
}

/// Adds up to `count` copies of `w` to the reachable set.
fn add_bounded(set: &mut Bits, w: u32, count: u64, cap: u32) {
    if w == 0 {
        return;
    }
    let mut left = count.min((cap / w) as u64);
    let mut chunk = 1u64;
    while left > 0 {
        let take = chunk.min(left);
        set.or_shifted((take * w as u64) as usize);
        left -= take;
        chunk *= 2;
    }
}
