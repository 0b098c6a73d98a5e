use std::fmt::Write as _;

use super::PackingSolution;
use crate::instance::VbpInstance;
use crate::reduce::{ItemOrigin, ReductionMap};

/// `z` on the first line, then one line per bin of `id×count` entries.
pub fn write_solution(sol: &PackingSolution, inst: &VbpInstance) -> String {
    let mut out = format!("{}\n", sol.objective);
    for bin in &sol.bins {
        let entries: Vec<String> = bin
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| format!("{}×{}", inst.item(i).external_id, c))
            .collect();
        out.push_str(&entries.join(" "));
        out.push('\n');
    }
    out
}

/// `vertex color` lines, both 1-based, by vertex.
pub fn format_coloring(sol: &PackingSolution, map: &ReductionMap) -> String {
    let mut colors: Vec<(usize, usize)> = Vec::new();
    for (b, bin) in sol.bins.iter().enumerate() {
        for (i, &c) in bin.iter().enumerate() {
            if let (true, Some(ItemOrigin::Vertex(v))) = (c > 0, map.items.get(i)) {
                colors.push((v + 1, b + 1));
            }
        }
    }
    colors.sort_unstable();
    colors.iter().fold(String::new(), |mut s, (v, c)| {
        let _ = writeln!(s, "{v} {c}");
        s
    })
}

/// One line per period listing its `(class,teacher,venue)` meetings, 1-based.
pub fn format_timetable(sol: &PackingSolution, map: &ReductionMap) -> String {
    let mut out = String::new();
    for (b, bin) in sol.bins.iter().enumerate() {
        let _ = write!(out, "period {}:", b + 1);
        for (i, &c) in bin.iter().enumerate() {
            if let Some(ItemOrigin::Requirement(r)) = map.items.get(i) {
                let req = map.requirements[*r];
                for _ in 0..c {
                    let _ = write!(out, " ({},{},{})", req.class + 1, req.teacher + 1, req.venue + 1);
                }
            }
        }
        out.push('\n');
    }
    out
}
