//! Report emission. Every command produces either a JSON document (with a
//! schema_version field so golden files stay stable) or CSV rows; both
//! render floats with the shortest round-trip formatting, so identical
//! inputs yield byte-identical output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Serialize a report to pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("report serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// A rectangular CSV with an optional per-row status cell; empty cells
/// mark quantities that are singular at the row's parameters.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Float cell with shortest round-trip formatting.
pub fn cell(v: f64) -> String {
    format!("{v}")
}

/// Write to the given path or stdout.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
