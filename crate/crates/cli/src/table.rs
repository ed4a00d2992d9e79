//! Tabular output with a provenance header.

use serde::Serialize;

use crate::error::{CliError, Result};

pub const TOOL: &str = concat!("qfisher ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub scenario_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(scenario_sha256: impl Into<String>, seed: u64) -> Self {
        Self {
            tool: TOOL.to_string(),
            scenario_sha256: scenario_sha256.into(),
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub provenance: Provenance,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_value(x: f64) -> String {
    format!("{x:?}")
}

/// `x` rounded to `digits` significant figures, fixed notation.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.9996 -> 10.000).
    let rounded: f64 = s.parse().unwrap_or(x);
    let new_magnitude = rounded.abs().log10().floor() as i64;
    if new_magnitude > magnitude && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

impl ScanTable {
    pub fn new(provenance: Provenance, columns: &[&str], rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(i) = rows.iter().position(|r| r.len() != columns.len()) {
            return Err(CliError::Usage(format!(
                "internal: row {i} has {} values for {} columns",
                rows[i].len(),
                columns.len()
            )));
        }
        Ok(Self {
            provenance,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# tool: {}\n", self.provenance.tool));
        out.push_str(&format!("# scenario_sha256: {}\n", self.provenance.scenario_sha256));
        out.push_str(&format!("# seed: {}\n", self.provenance.seed));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
        s.push('\n');
        s
    }
}

/// JSON document `{"provenance": ..., "result": ...}`.
pub fn json_with_provenance<T: Serialize>(provenance: &Provenance, result: &T) -> String {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        provenance: &'a Provenance,
        result: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc { provenance, result }).expect("reports serialize");
    s.push('\n');
    s
}
