//! Machine-readable report shared by every command, plus its text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use koszul_hh_core::Check;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandInfo {
    pub name: String,
    pub field: String,
    pub options: BTreeMap<String, String>,
}

/// One `(degree, weight)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    /// Which table the cell belongs to, e.g. `HH`, `Lambda`, `K`.
    pub table: String,
    pub degree: i64,
    /// `None` for slices without a weight (finite coefficients, truncations).
    pub weight: Option<i64>,
    pub dim: usize,
    pub representatives: Vec<String>,
    /// For estimates: whether the two filtration bounds agreed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<Check> for CheckRecord {
    fn from(c: Check) -> Self {
        CheckRecord {
            name: c.name,
            pass: c.pass,
            witness: c.witness,
        }
    }
}

/// Matrix of a central element acting between two slices, in class coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub element: String,
    pub degree: i64,
    pub source_weight: Option<i64>,
    pub target_weight: Option<i64>,
    pub rows: Vec<Vec<String>>,
}

/// A reduced product of two basis classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRecord {
    pub left: ClassRef,
    pub right: ClassRef,
    pub target: ClassSlice,
    /// Coefficients on the representatives of the target slice.
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRef {
    pub degree: i64,
    pub weight: i64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSlice {
    pub degree: i64,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// `sha256:<hex>` of the presentation file contents.
    pub presentation: String,
    pub command: CommandInfo,
    pub tables: Vec<TableEntry>,
    pub checks: Vec<CheckRecord>,
    pub estimate: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<MatrixRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductRecord>,
    /// Free-form lines such as differentials and the curvature.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    format!("sha256:{}", hex::encode(hash))
}

impl Report {
    pub fn new(text: &str, command: CommandInfo) -> Self {
        Report {
            presentation: digest(text),
            command,
            tables: Vec::new(),
            checks: Vec::new(),
            estimate: false,
            matrices: Vec::new(),
            products: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Dimension of one cell, if present.
    pub fn dim(&self, table: &str, degree: i64, weight: Option<i64>) -> Option<usize> {
        self.tables
            .iter()
            .find(|e| e.table == table && e.degree == degree && e.weight == weight)
            .map(|e| e.dim)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "presentation {}", self.presentation);
        let opts: Vec<String> = self
            .command
            .options
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(
            out,
            "command {} over {} {}",
            self.command.name,
            self.command.field,
            opts.join(" ")
        );
        if self.estimate {
            let _ = writeln!(
                out,
                "ESTIMATE: dimensions below come from a truncated complex and are not exact"
            );
        }
        let mut names: Vec<&str> = Vec::new();
        for e in &self.tables {
            if !names.contains(&e.table.as_str()) {
                names.push(&e.table);
            }
        }
        for name in names {
            render_table(
                &mut out,
                name,
                self.tables.iter().filter(|e| e.table == name).collect(),
            );
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out);
            for n in &self.notes {
                let _ = writeln!(out, "{n}");
            }
        }
        for m in &self.matrices {
            let _ = writeln!(
                out,
                "\n{} on degree {}: weight {} -> {}",
                m.element,
                m.degree,
                fmt_weight(m.source_weight),
                fmt_weight(m.target_weight)
            );
            if m.rows.is_empty() {
                let _ = writeln!(out, "  (zero target)");
            }
            for r in &m.rows {
                let _ = writeln!(out, "  [{}]", r.join(", "));
            }
        }
        if !self.products.is_empty() {
            let _ = writeln!(out, "\nproducts (coefficients on target representatives)");
            for p in &self.products {
                let _ = writeln!(
                    out,
                    "  H^{}_{}[{}] * H^{}_{}[{}] = [{}] in H^{}_{}",
                    p.left.degree,
                    p.left.weight,
                    p.left.index,
                    p.right.degree,
                    p.right.weight,
                    p.right.index,
                    p.coefficients.join(", "),
                    p.target.degree,
                    p.target.weight
                );
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks");
            for c in &self.checks {
                let _ = write!(
                    out,
                    "  [{}] {}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name
                );
                if let Some(w) = &c.witness {
                    let _ = write!(out, ": {w}");
                }
                let _ = writeln!(out);
            }
        }
        out
    }
}

fn fmt_weight(w: Option<i64>) -> String {
    w.map_or_else(|| "-".into(), |w| w.to_string())
}

fn render_table(out: &mut String, name: &str, entries: Vec<&TableEntry>) {
    let mut degrees: Vec<i64> = entries.iter().map(|e| e.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut weights: Vec<Option<i64>> = entries.iter().map(|e| e.weight).collect();
    weights.sort_unstable();
    weights.dedup();
    let _ = writeln!(out, "\n{name} dimensions (rows: degree, columns: weight)");
    let _ = write!(out, "{:>8}", "");
    for w in &weights {
        let _ = write!(out, "{:>6}", fmt_weight(*w));
    }
    let _ = writeln!(out);
    for d in &degrees {
        let _ = write!(out, "{d:>8}");
        for w in &weights {
            let cell = entries.iter().find(|e| e.degree == *d && e.weight == *w);
            let s = match cell {
                Some(e) if e.stable == Some(false) => format!("{}?", e.dim),
                Some(e) => e.dim.to_string(),
                None => ".".into(),
            };
            let _ = write!(out, "{s:>6}");
        }
        let _ = writeln!(out);
    }
    if entries.iter().any(|e| e.stable == Some(false)) {
        let _ = writeln!(
            out,
            "  (? marks estimates that changed between the two filtration bounds)"
        );
    }
    let with_reps: Vec<&&TableEntry> = entries
        .iter()
        .filter(|e| !e.representatives.is_empty())
        .collect();
    if !with_reps.is_empty() {
        let _ = writeln!(out, "{name} representatives");
        for e in with_reps {
            let _ = writeln!(
                out,
                "  degree {}, weight {}:",
                e.degree,
                fmt_weight(e.weight)
            );
            for (i, r) in e.representatives.iter().enumerate() {
                let _ = writeln!(out, "    [{i}] {r}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips() {
        let mut r = Report::new(
            "generators: x\n",
            CommandInfo {
                name: "hh".into(),
                field: "Q".into(),
                options: BTreeMap::new(),
            },
        );
        r.tables.push(TableEntry {
            table: "HH".into(),
            degree: 1,
            weight: Some(-1),
            dim: 1,
            representatives: vec!["l1 (x) 1".into()],
            stable: None,
        });
        r.checks.push(CheckRecord {
            name: "x".into(),
            pass: false,
            witness: Some("w".into()),
        });
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.presentation.starts_with("sha256:"));
    }
}
