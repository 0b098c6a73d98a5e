use std::fmt::Write as _;
use std::str::FromStr;

use super::{MilpModel, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelFormat {
    /// CPLEX LP text.
    Lp,
    /// Fixed MPS, or free MPS when a name does not fit an 8-character field.
    Mps,
}

impl ModelFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ModelFormat::Lp => "lp",
            ModelFormat::Mps => "mps",
        }
    }
}

impl FromStr for ModelFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(ModelFormat::Lp),
            "mps" => Ok(ModelFormat::Mps),
            other => Err(format!("unknown model format `{other}` (expected lp or mps)")),
        }
    }
}

/// Renders a model. The second element holds warnings (e.g. the switch to
/// free MPS).
pub fn write_model(model: &MilpModel, format: ModelFormat) -> (String, Vec<String>) {
    match format {
        ModelFormat::Lp => (write_lp(model), Vec::new()),
        ModelFormat::Mps => write_mps(model),
    }
}

const LP_LINE: usize = 200;

fn push_terms(out: &mut String, line: &mut String, terms: impl Iterator<Item = (i64, String)>, first: bool) {
    let mut first = first;
    for (a, name) in terms {
        let sign = if a < 0 { "-" } else if first { "" } else { "+" };
        let mag = a.unsigned_abs();
        let tok = match (sign.is_empty(), mag) {
            (true, 1) => name,
            (true, _) => format!("{mag} {name}"),
            (false, 1) => format!("{sign} {name}"),
            (false, _) => format!("{sign} {mag} {name}"),
        };
        if line.len() + tok.len() + 1 > LP_LINE {
            out.push_str(line.trim_end());
            out.push('\n');
            line.clear();
            line.push_str("   ");
        }
        line.push(' ');
        line.push_str(&tok);
        first = false;
    }
}

fn write_lp(model: &MilpModel) -> String {
    let name = |v: usize| model.variables[v].name.clone();
    let mut out = format!("\\ {}\nMinimize\n", model.name);
    let mut line = String::from(" obj:");
    if model.objective.is_empty() {
        line.push_str(" 0");
    }
    push_terms(&mut out, &mut line, model.objective.iter().map(|&(v, a)| (a, name(v))), true);
    out.push_str(&line);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let mut line = format!(" {}:", c.name);
        if c.terms.is_empty() {
            line.push_str(" 0 ");
            line.push_str(&name(0));
        }
        push_terms(&mut out, &mut line, c.terms.iter().map(|&(v, a)| (a, name(v))), true);
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, "{line} {op} {}", c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        match v.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, u);
            }
            None => {
                let _ = writeln!(out, " {} >= {}", v.name, v.lower);
            }
        }
    }
    let ints: Vec<&str> = model.variables.iter().filter(|v| v.integer).map(|v| v.name.as_str()).collect();
    if !ints.is_empty() {
        out.push_str("Generals\n");
        let mut line = String::new();
        for n in ints {
            if line.len() + n.len() + 1 > LP_LINE {
                out.push_str(&line);
                out.push('\n');
                line.clear();
            }
            line.push(' ');
            line.push_str(n);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

const OBJ_ROW: &str = "OBJ";

fn write_mps(model: &MilpModel) -> (String, Vec<String>) {
    let mut warnings = Vec::new();
    let too_long = model
        .variables
        .iter()
        .map(|v| v.name.as_str())
        .chain(model.constraints.iter().map(|c| c.name.as_str()))
        .chain(std::iter::once(model.name.as_str()))
        .find(|n| n.len() > 8);
    let fixed = too_long.is_none();
    if let Some(n) = too_long {
        warnings.push(format!("name `{n}` exceeds 8 characters; writing free MPS"));
    }
    // Fixed MPS field starts (1-based): 2, 5, 15, 25, 40, 50.
    let fields = |f1: &str, f2: &str, f3: &str, f4: &str| -> String {
        if fixed {
            let mut s = format!(" {f1:<2} {f2:<8}");
            if !f3.is_empty() {
                s.push_str(&format!("  {f3:<8}  {f4:>12}"));
            }
            s.trim_end().to_string()
        } else {
            [f1, f2, f3, f4].iter().filter(|s| !s.is_empty()).fold(String::new(), |mut acc, s| {
                acc.push(' ');
                acc.push_str(s);
                acc
            })
        }
    };

    let mut out = format!("NAME          {}\nROWS\n", model.name);
    out.push_str(&fields("N", OBJ_ROW, "", ""));
    out.push('\n');
    for c in &model.constraints {
        let t = match c.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        out.push_str(&fields(t, &c.name, "", ""));
        out.push('\n');
    }

    // Column-major coefficient lists.
    let mut cols: Vec<Vec<(&str, i64)>> = vec![Vec::new(); model.variables.len()];
    for &(v, a) in &model.objective {
        cols[v].push((OBJ_ROW, a));
    }
    for c in &model.constraints {
        for &(v, a) in &c.terms {
            cols[v].push((&c.name, a));
        }
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0;
    for (v, var) in model.variables.iter().enumerate() {
        if var.integer != in_int {
            let kind = if var.integer { "'INTORG'" } else { "'INTEND'" };
            out.push_str(&marker_line(fixed, marker, kind));
            marker += 1;
            in_int = var.integer;
        }
        if cols[v].is_empty() {
            // Keep the column declared.
            out.push_str(&fields("", &var.name, OBJ_ROW, "0"));
            out.push('\n');
        }
        for &(row, a) in &cols[v] {
            out.push_str(&fields("", &var.name, row, &a.to_string()));
            out.push('\n');
        }
    }
    if in_int {
        out.push_str(&marker_line(fixed, marker, "'INTEND'"));
    }

    out.push_str("RHS\n");
    for c in model.constraints.iter().filter(|c| c.rhs != 0) {
        out.push_str(&fields("", "RHS", &c.name, &c.rhs.to_string()));
        out.push('\n');
    }

    out.push_str("BOUNDS\n");
    for var in &model.variables {
        let n = var.name.as_str();
        match var.upper {
            Some(u) if u == var.lower => {
                out.push_str(&fields("FX", "BND", n, &u.to_string()));
                out.push('\n');
            }
            Some(u) => {
                if var.lower != 0 {
                    out.push_str(&fields("LO", "BND", n, &var.lower.to_string()));
                    out.push('\n');
                }
                out.push_str(&fields("UP", "BND", n, &u.to_string()));
                out.push('\n');
            }
            None => {
                if var.lower != 0 {
                    out.push_str(&fields("LO", "BND", n, &var.lower.to_string()));
                    out.push('\n');
                }
                if var.integer {
                    // Some readers give integer columns a default upper bound of 1.
                    out.push_str(&fields("PL", "BND", n, ""));
                    out.push('\n');
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    (out, warnings)
}

fn marker_line(fixed: bool, k: usize, kind: &str) -> String {
    let name = format!("M{k}");
    if fixed {
        format!("    {name:<8}  {:<8}  {kind:>12}\n", "'MARKER'")
    } else {
        format!(" {name} 'MARKER' {kind}\n")
    }
}

/// Sidecar text mapping each arc variable to `tail head item`.
pub fn write_annotations(model: &MilpModel) -> String {
    let mut out = String::new();
    for (var, ann) in model.variables.iter().zip(&model.annotations) {
        if let Some(a) = ann {
            let _ = writeln!(out, "{} {} {} {} {}", var.name, a.arc, a.tail_label, a.head_label, a.item);
        }
    }
    out
}
