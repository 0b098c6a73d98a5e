use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{DimOrigin, ItemOrigin, ReduceError, ReductionKind, ReductionMap};
use crate::instance::{ItemType, VbpInstance};

/// One class/teacher/venue meeting with its number of periods.
/// Ids are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Requirement {
    pub class: usize,
    pub teacher: usize,
    pub venue: usize,
    pub demand: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Timetable {
    pub teachers: usize,
    pub classes: usize,
    pub venues: usize,
    pub requirements: Vec<Requirement>,
}

/// Bins are periods. Dimensions are classes, then teachers, then venues,
/// all of capacity 1. Repeated triplets are merged by summing demands, in
/// order of first appearance.
pub fn timetable_to_vbp(tt: &Timetable) -> Result<(VbpInstance, ReductionMap), ReduceError> {
    let Timetable { teachers, classes, venues, .. } = *tt;
    if teachers == 0 || classes == 0 || venues == 0 {
        return Err(ReduceError::BadRequirement {
            index: 0,
            message: "teacher, class and venue counts must be positive".into(),
        });
    }
    if tt.requirements.is_empty() {
        return Err(ReduceError::NoRequirements);
    }
    let mut merged: Vec<Requirement> = Vec::new();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (index, r) in tt.requirements.iter().enumerate() {
        let bad = |message: String| ReduceError::BadRequirement { index: index + 1, message };
        if r.class >= classes || r.teacher >= teachers || r.venue >= venues {
            return Err(bad("id out of range".into()));
        }
        if r.demand == 0 {
            return Err(bad("demand must be positive".into()));
        }
        match seen.get(&(r.class, r.teacher, r.venue)) {
            Some(&k) => merged[k].demand += r.demand,
            None => {
                seen.insert((r.class, r.teacher, r.venue), merged.len());
                merged.push(*r);
            }
        }
    }
    let p = classes + teachers + venues;
    let items = merged
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut w = vec![0u32; p];
            w[r.class] = 1;
            w[classes + r.teacher] = 1;
            w[classes + teachers + r.venue] = 1;
            ItemType::new(w, r.demand, (k + 1).to_string())
        })
        .collect();
    let inst = VbpInstance::new(vec![1; p], items)?;
    let dims = (0..classes)
        .map(DimOrigin::Class)
        .chain((0..teachers).map(DimOrigin::Teacher))
        .chain((0..venues).map(DimOrigin::Venue))
        .collect();
    let map = ReductionMap {
        kind: ReductionKind::Timetable,
        dims,
        items: (0..merged.len()).map(ItemOrigin::Requirement).collect(),
        graph: None,
        requirements: merged,
        cardinality: None,
        binary: false,
    };
    Ok((inst, map))
}

/// Parses `t c v` followed by `class teacher venue demand` lines (1-based ids).
pub fn parse_timetable_str(text: &str) -> Result<Timetable, ReduceError> {
    let mut header = None;
    let mut requirements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ReduceError::Parse { line: idx + 1, message: "non-integer token".into() })?;
        let expected = if header.is_none() { 3 } else { 4 };
        if nums.len() != expected {
            return Err(ReduceError::Parse {
                line: idx + 1,
                message: format!("expected {expected} values, found {}", nums.len()),
            });
        }
        match header {
            None => header = Some((nums[0] as usize, nums[1] as usize, nums[2] as usize)),
            Some(_) => {
                if nums[..3].contains(&0) {
                    return Err(ReduceError::Parse { line: idx + 1, message: "ids are 1-based".into() });
                }
                requirements.push(Requirement {
                    class: nums[0] as usize - 1,
                    teacher: nums[1] as usize - 1,
                    venue: nums[2] as usize - 1,
                    demand: nums[3],
                });
            }
        }
    }
    let (teachers, classes, venues) =
        header.ok_or(ReduceError::Parse { line: 0, message: "missing header".into() })?;
    Ok(Timetable { teachers, classes, venues, requirements })
}

pub fn parse_timetable(path: impl AsRef<Path>) -> Result<Timetable, ReduceError> {
    parse_timetable_str(&std::fs::read_to_string(path)?)
}

pub fn write_timetable(tt: &Timetable) -> String {
    let mut out = format!("{} {} {}\n", tt.teachers, tt.classes, tt.venues);
    for r in &tt.requirements {
        writeln!(out, "{} {} {} {}", r.class + 1, r.teacher + 1, r.venue + 1, r.demand).unwrap();
    }
    out
}
