//! Table emission: RFC-style CSV or one `key=value` record per line.

use std::io::Write;

use clap::ValueEnum;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Records,
}

/// 15 significant digits, lowercase exponent.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table {
    columns: &'static [&'static str],
    metadata: Vec<(String, String)>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, metadata: Vec::new(), rows: Vec::new() }
    }

    /// Emitted as `# key=value` lines ahead of the header.
    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<(), CliError> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={}", record_value(v))?;
        }
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Format::Records => {
                for row in &self.rows {
                    let fields: Vec<String> =
                        self.columns.iter().zip(row).map(|(k, v)| format!("{k}={}", record_value(v))).collect();
                    writeln!(out, "{}", fields.join(" "))?;
                }
            }
        }
        Ok(())
    }
}

/// Values with whitespace, quotes or `=` are double-quoted.
fn record_value(v: &str) -> String {
    if v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\""))
    } else {
        v.to_string()
    }
}
