//! Deterministic report emission.
//!
//! Every command produces a [`Report`]: a JSON object (keys carry SI
//! units in their names) plus a CSV rendering (units in the header).
//! JSON keys are emitted in sorted order and floats use the shortest
//! round-trip decimal form in both formats, so identical runs produce
//! byte-identical files.

use relgas_core::{Error, Result};
use serde_json::Value;

/// One numeric CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    /// Floating-point value (shortest round-trip rendering).
    Float(f64),
    /// Integer value.
    Int(u64),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Int(v) => write!(f, "{v}"),
        }
    }
}

/// A finished command result, ready to serialize either way.
#[derive(Debug, Clone)]
pub struct Report {
    /// JSON form; object keys carry units.
    pub json: Value,
    /// CSV column names, units embedded.
    pub columns: Vec<&'static str>,
    /// CSV rows.
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    /// Renders the requested format (`json` or `csv`) with a trailing
    /// newline.
    pub fn render(&self, format: &str) -> Result<String> {
        match format {
            "json" => {
                let text = serde_json::to_string_pretty(&self.json).map_err(|e| {
                    Error::domain(format!("cannot serialize the report to JSON: {e}"))
                })?;
                Ok(format!("{text}\n"))
            }
            "csv" => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    debug_assert_eq!(row.len(), self.columns.len());
                    let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
                Ok(out)
            }
            other => Err(Error::domain(format!(
                "unknown output format \"{other}\"; expected json or csv"
            ))),
        }
    }
}

/// JSON value for an `f64`, mapping non-finite values to tagged strings
/// (`"inf"`, `"-inf"`, `"nan"`) instead of silently emitting `null`.
pub fn json_f64(v: f64) -> Value {
    if v.is_nan() {
        Value::String("nan".to_string())
    } else if v == f64::INFINITY {
        Value::String("inf".to_string())
    } else if v == f64::NEG_INFINITY {
        Value::String("-inf".to_string())
    } else {
        serde_json::json!(v)
    }
}

/// Writes rendered text to the path, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&str>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::domain(format!("cannot write output file {p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
