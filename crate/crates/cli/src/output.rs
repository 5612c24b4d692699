//! CSV and JSON emission with a provenance header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Text(String),
    Missing,
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => "NA".into(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Int(v) => json!(v),
            Value::Float(v) => json!(v),
            Value::Text(s) => json!(s),
            Value::Missing => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Extra header lines, also copied to stderr.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Provenance {
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: u64,
}

pub fn emit(table: &Table, provenance: &Provenance, format: Format, output: Option<&Path>) -> Result<()> {
    for note in &table.notes {
        eprintln!("note: {note}");
    }
    match output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_table(&mut w, table, provenance, format)?;
            w.flush().with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_table(&mut w, table, provenance, format)?;
            w.flush().context("writing stdout")
        }
    }
}

pub fn write_table<W: Write>(mut w: W, table: &Table, provenance: &Provenance, format: Format) -> Result<()> {
    let version = env!("CARGO_PKG_VERSION");
    match format {
        Format::Csv => {
            writeln!(w, "# vpvc {version} {}", provenance.command)?;
            writeln!(w, "# config_sha256 {}", provenance.config_sha256)?;
            writeln!(w, "# seed {}", provenance.seed)?;
            for note in &table.notes {
                writeln!(w, "# {note}")?;
            }
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&table.columns)?;
            for row in &table.rows {
                csv.write_record(row.iter().map(Value::csv))?;
            }
            csv.flush()?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let map: Map<String, serde_json::Value> =
                        table.columns.iter().cloned().zip(row.iter().map(Value::json)).collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let doc = json!({
                "provenance": {
                    "toolkit": format!("vpvc {version}"),
                    "command": provenance.command,
                    "config_sha256": provenance.config_sha256,
                    "seed": provenance.seed,
                    "notes": table.notes,
                },
                "rows": rows,
            });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    Ok(())
}
