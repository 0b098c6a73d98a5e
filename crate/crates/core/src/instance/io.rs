use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{InstanceError, ItemType, VbpInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceFormat {
    /// `p`, capacities, `m`, then `w^1 .. w^p b` per item.
    Vbp,
    /// `m`, `W`, then `w b` per item.
    Bpp,
    /// Same layout as [`InstanceFormat::Bpp`].
    Csp,
}

impl FromStr for InstanceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vbp" => Ok(InstanceFormat::Vbp),
            "bpp" => Ok(InstanceFormat::Bpp),
            "csp" => Ok(InstanceFormat::Csp),
            other => Err(format!("unknown instance format `{other}`")),
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                self.last = idx + 1;
                return Some((idx + 1, line));
            }
        }
        None
    }

    /// Next non-blank, non-comment line as integer tokens.
    fn next_ints<T: FromStr>(&mut self, what: &str) -> Result<(usize, Vec<T>), InstanceError> {
        let Some((line, text)) = self.next_content() else {
            return Err(InstanceError::Parse { line: self.last + 1, message: format!("missing {what}") });
        };
        let tokens = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<T>().map_err(|_| InstanceError::Parse {
                    line,
                    message: format!("expected a non-negative integer, found `{tok}`"),
                })
            })
            .collect::<Result<Vec<T>, _>>()?;
        Ok((line, tokens))
    }

    fn expect_ints<T: FromStr>(&mut self, n: usize, what: &str) -> Result<Vec<T>, InstanceError> {
        let (line, tokens) = self.next_ints(what)?;
        if tokens.len() != n {
            return Err(InstanceError::Parse {
                line,
                message: format!("expected {n} value(s) for {what}, found {}", tokens.len()),
            });
        }
        Ok(tokens)
    }

    fn expect_end(&mut self) -> Result<(), InstanceError> {
        match self.next_content() {
            Some((line, _)) => {
                Err(InstanceError::Parse { line, message: "unexpected trailing data".into() })
            }
            None => Ok(()),
        }
    }
}

fn read_items(
    lines: &mut Lines<'_>,
    m: usize,
    p: usize,
) -> Result<Vec<ItemType>, InstanceError> {
    let mut items = Vec::with_capacity(m);
    for i in 0..m {
        let (line, tokens) = lines.next_ints::<u64>("item line")?;
        if tokens.len() != p + 1 {
            return Err(InstanceError::Parse {
                line,
                message: format!("item line needs {} values, found {}", p + 1, tokens.len()),
            });
        }
        let weights = tokens[..p]
            .iter()
            .map(|&w| {
                u32::try_from(w).map_err(|_| InstanceError::Parse {
                    line,
                    message: format!("weight {w} is too large"),
                })
            })
            .collect::<Result<Vec<u32>, _>>()?;
        items.push(ItemType::new(weights, tokens[p], (i + 1).to_string()));
    }
    Ok(items)
}

/// Parses instance text.
pub fn parse_instance_str(text: &str, format: InstanceFormat) -> Result<VbpInstance, InstanceError> {
    let mut lines = Lines::new(text);
    let (caps, items) = match format {
        InstanceFormat::Vbp => {
            let p = lines.expect_ints::<usize>(1, "dimension count")?[0];
            let caps = lines.expect_ints::<u32>(p, "capacities")?;
            let m = lines.expect_ints::<usize>(1, "item count")?[0];
            (caps, read_items(&mut lines, m, p)?)
        }
        InstanceFormat::Bpp | InstanceFormat::Csp => {
            let m = lines.expect_ints::<usize>(1, "item count")?[0];
            let caps = lines.expect_ints::<u32>(1, "capacity")?;
            (caps, read_items(&mut lines, m, 1)?)
        }
    };
    lines.expect_end()?;
    VbpInstance::new(caps, items)
}

pub fn parse_instance(path: impl AsRef<Path>, format: InstanceFormat) -> Result<VbpInstance, InstanceError> {
    let text = std::fs::read_to_string(path)?;
    parse_instance_str(&text, format)
}

/// Renders an instance in the given format. One-dimensional formats reject
/// instances with more than one dimension.
pub fn write_instance(inst: &VbpInstance, format: InstanceFormat) -> Result<String, InstanceError> {
    let mut out = String::new();
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    match format {
        InstanceFormat::Vbp => {
            writeln!(out, "{}", inst.dim_count()).unwrap();
            writeln!(out, "{}", join(inst.capacities())).unwrap();
            writeln!(out, "{}", inst.item_count()).unwrap();
        }
        InstanceFormat::Bpp | InstanceFormat::Csp => {
            if inst.dim_count() != 1 {
                return Err(InstanceError::Format(format!(
                    "{format:?} files hold one dimension, instance has {}",
                    inst.dim_count()
                )));
            }
            writeln!(out, "{}", inst.item_count()).unwrap();
            writeln!(out, "{}", inst.capacities()[0]).unwrap();
        }
    }
    for it in inst.items() {
        writeln!(out, "{} {}", join(&it.weights), it.demand).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_one_dimensional_file() {
        let text = "# example\n3\n7\n5 3\n3 1\n2 2\n";
        let inst = parse_instance_str(text, InstanceFormat::Bpp).unwrap();
        assert_eq!(inst.dim_count(), 1);
        assert_eq!(inst.item_count(), 3);
        assert_eq!(inst.demands(), vec![3, 1, 2]);
        assert_eq!(inst.item(1).external_id, "2");
    }

    #[test]
    fn parses_two_dimensional_file() {
        let text = "2\n7 3\n3\n5 1 3\n3 1 1\n2 1 2\n";
        let inst = parse_instance_str(text, InstanceFormat::Vbp).unwrap();
        assert_eq!(inst.capacities(), &[7, 3]);
        assert_eq!(inst.weights(2), &[2, 1]);
    }

    #[test]
    fn too_wide_item_names_the_item() {
        let err = parse_instance_str("1\n7\n8 1\n", InstanceFormat::Bpp).unwrap_err();
        assert!(err.to_string().contains("item 1"), "{err}");
    }

    #[test]
    fn bad_token_reports_line() {
        let err = parse_instance_str("3\n7\n5 3\n3 x\n2 2\n", InstanceFormat::Csp).unwrap_err();
        match err {
            InstanceError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let short = parse_instance_str("3\n7\n5 3\n", InstanceFormat::Csp).unwrap_err();
        assert!(matches!(short, InstanceError::Parse { .. }));
    }

    proptest! {
        #[test]
        fn write_then_parse_round_trips(
            caps in proptest::collection::vec(5u32..=30, 1..=3),
            raw in proptest::collection::vec((proptest::collection::vec(1u32..=5, 3), 1u64..=9), 1..=6),
        ) {
            let p = caps.len();
            let items = raw
                .into_iter()
                .enumerate()
                .map(|(i, (w, b))| ItemType::new(w[..p].to_vec(), b, (i + 1).to_string()))
                .collect();
            let inst = VbpInstance::new(caps, items).unwrap();
            let text = write_instance(&inst, InstanceFormat::Vbp).unwrap();
            prop_assert_eq!(parse_instance_str(&text, InstanceFormat::Vbp).unwrap(), inst);
        }
    }
}
