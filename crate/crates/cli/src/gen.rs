use arcflow::instance::{ItemType, VbpInstance};
use arcflow::reduce::{Requirement, Timetable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest demand drawn by [`gen_divisible`].
pub const DIVISIBLE_MAX_DEMAND: u64 = 20;

/// Random one-dimensional instance in which every size divides `capacity`.
/// Sizes are distinct proper divisors (all of them when fewer than `m`
/// exist); demands are uniform in `1..=20`.
pub fn gen_divisible(seed: u64, m: usize, capacity: u32) -> VbpInstance {
    assert!(capacity >= 2, "capacity must be at least 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let divisors: Vec<u32> = (1..capacity).filter(|d| capacity % d == 0).collect();
    let mut sizes: Vec<u32> = divisors.choose_multiple(&mut rng, m.max(1).min(divisors.len())).copied().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let items = sizes
        .iter()
        .enumerate()
        .map(|(i, &w)| ItemType::new(vec![w], rng.gen_range(1..=DIVISIBLE_MAX_DEMAND), (i + 1).to_string()))
        .collect();
    VbpInstance::new(vec![capacity], items).expect("divisors fit the capacity")
}

/// Random timetable with `k` classes, teachers and venues that fits exactly
/// `periods` periods: each period is a random perfect matching of classes,
/// teachers and venues. Repeated meetings are merged by demand, in order of
/// first appearance.
pub fn gen_timetable(seed: u64, k: usize, periods: usize) -> Timetable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reqs: Vec<Requirement> = Vec::new();
    let mut teachers: Vec<usize> = (0..k).collect();
    let mut venues: Vec<usize> = (0..k).collect();
    for _ in 0..periods {
        teachers.shuffle(&mut rng);
        venues.shuffle(&mut rng);
        for class in 0..k {
            let (teacher, venue) = (teachers[class], venues[class]);
            match reqs.iter_mut().find(|r| (r.class, r.teacher, r.venue) == (class, teacher, venue)) {
                Some(r) => r.demand += 1,
                None => reqs.push(Requirement { class, teacher, venue, demand: 1 }),
            }
        }
    }
    Timetable { teachers: k, classes: k, venues: k, requirements: reqs }
}

/// Seed of the synthetic stand-in for hdtt4 (see [`hdtt4`]).
pub const HDTT4_SEED: u64 = 11;

/// Synthetic counterpart of the hdtt4 benchmark: 4 classes, teachers and
/// venues, 30 periods, 120 meetings over 59 distinct triplets. The original
/// file is not redistributed; this generator and [`HDTT4_SEED`] reproduce
/// the bundled fixture.
pub fn hdtt4() -> Timetable {
    gen_timetable(HDTT4_SEED, 4, 30)
}
