#![allow(dead_code)]

use arcflow::instance::{ItemType, VbpInstance};
use arcflow::solve::SolverConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn solver() -> Option<SolverConfig> {
    match SolverConfig::discover() {
        Ok(cfg) => Some(cfg.with_time_limit(60.0)),
        Err(e) => {
            eprintln!("skipping: {e}");
            None
        }
    }
}

/// `m ≤ 6` item types, `p ≤ 2` dimensions, capacities ≤ 20, demands ≤ 4.
pub fn random_small(seed: u64) -> VbpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(1..=2);
    let caps: Vec<u32> = (0..p).map(|_| rng.gen_range(2..=20)).collect();
    let m = rng.gen_range(1..=6);
    let items = (0..m)
        .map(|i| {
            let mut w: Vec<u32> = caps.iter().map(|&c| rng.gen_range(0..=c)).collect();
            if w.iter().all(|&x| x == 0) {
                w[0] = 1;
            }
            ItemType::new(w, rng.gen_range(1..=4), (i + 1).to_string())
        })
        .collect();
    VbpInstance::new(caps, items).unwrap()
}
