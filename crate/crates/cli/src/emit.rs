//! Deterministic output rendering: value rounding, CSV tables, JSON reports.
//!
//! All numbers pass through [`round_sig`] before being rendered, so CSV and
//! JSON carry the same digits and repeated runs produce byte-identical
//! output.  Formatting never consults the process locale: it is built on
//! Rust's locale-independent float formatting.

use serde::{Deserialize, Serialize};

use entrogeo_core::EntropicReport;

use crate::config::RunConfig;

/// Schema tag stamped into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// Round `x` to `digits` significant digits (1..=17), exactly representable
/// as the nearest f64 to the rounded decimal.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = digits.clamp(1, 17);
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("scientific notation round-trip")
}

/// Render one value at the requested number of significant digits.
///
/// Magnitudes in `[1e-4, 10^digits)` print in plain decimal; anything
/// outside that window falls back to scientific notation so columns never
/// degenerate into long zero runs.
pub fn format_value(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let r = round_sig(x, digits);
    if r == 0.0 {
        return "0".to_string();
    }
    let mag = r.abs();
    if mag >= 1e-4 && mag < 10f64.powi(digits as i32) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl Cell {
    fn render_csv(&self, digits: usize) -> String {
        match self {
            Cell::Num(x) => format_value(*x, digits),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn render_json(&self, digits: usize) -> serde_json::Value {
        match self {
            Cell::Num(x) => {
                let r = round_sig(*x, digits);
                serde_json::Number::from_f64(r)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null)
            }
            Cell::Int(n) => serde_json::Value::from(*n),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Flag(b) => serde_json::Value::Bool(*b),
        }
    }
}

/// An in-memory table produced by a subcommand, prior to serialization.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub header_notes: Vec<String>,
    pub footer_notes: Vec<String>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            header_notes: Vec::new(),
            footer_notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Render as CSV: `#`-prefixed notes, a header row, then data rows.
    /// Lines end with `\n`; fields never need quoting (no commas in cells).
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::new();
        for note in &self.header_notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| c.render_csv(digits)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        for note in &self.footer_notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    pub fn to_document(&self, digits: usize) -> TableDocument {
        TableDocument {
            columns: self.columns.iter().map(|s| s.to_string()).collect(),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|c| c.render_json(digits)).collect())
                .collect(),
            header_notes: self.header_notes.clone(),
            footer_notes: self.footer_notes.clone(),
        }
    }
}

/// JSON form of a [`Table`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub header_notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub footer_notes: Vec<String>,
}

/// Result of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Observed figure of merit (deviation, violation count, ...).
    pub deviation: f64,
    /// Threshold the figure of merit was compared against.
    pub threshold: f64,
    pub detail: String,
}

/// Aggregate outcome of the verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Top-level JSON document emitted by every subcommand in JSON mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<EntropicReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSummary>,
}

impl ReportDocument {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config: config.clone(),
            table: None,
            comparison: None,
            verification: None,
        }
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}
