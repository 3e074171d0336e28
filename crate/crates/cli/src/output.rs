//! Tabular output as CSV or JSON with identical numbers.
//!
//! Every numeric cell is formatted once; JSON numbers are parsed back from
//! that text so both formats carry the same values.

use std::io::Write;

use anyhow::Result;
use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(String),
    Int(i64),
    Bool(bool),
    Missing,
}

/// Energies as printed in the reference tables.
pub fn e8(x: f64) -> Cell {
    let s = format!("{x:.8}");
    // a root at 0 computed as -3e-14 should not print as -0.00000000
    if s.trim_start_matches('-').trim_matches(|c| c == '0' || c == '.').is_empty() {
        return Cell::Num("0.00000000".into());
    }
    Cell::Num(s)
}

/// Shortest representation that round-trips.
pub fn full(x: f64) -> Cell {
    if x.is_finite() {
        Cell::Num(format!("{x:?}"))
    } else {
        Cell::Missing
    }
}

pub fn sci(x: f64) -> Cell {
    if x.is_finite() {
        Cell::Num(format!("{x:.3e}"))
    } else {
        Cell::Missing
    }
}

pub fn fixed(x: f64, digits: usize) -> Cell {
    Cell::Num(format!("{x:.digits$}"))
}

pub fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), meta: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, with_meta: bool, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(with_meta, out),
            Format::Json => self.write_json(with_meta, out),
        }
    }

    fn write_csv(&self, with_meta: bool, out: &mut dyn Write) -> Result<()> {
        if with_meta {
            for (k, v) in &self.meta {
                writeln!(out, "# {k}: {v}")?;
            }
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Text(s) | Cell::Num(s) => s.clone(),
                Cell::Int(i) => i.to_string(),
                Cell::Bool(b) => b.to_string(),
                Cell::Missing => String::new(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, with_meta: bool, out: &mut dyn Write) -> Result<()> {
        let meta: Vec<Value> = if with_meta {
            self.meta
                .iter()
                .map(|(k, v)| {
                    let mut m = Map::new();
                    m.insert("key".into(), Value::String(k.clone()));
                    m.insert("value".into(), Value::String(v.clone()));
                    Value::Object(m)
                })
                .collect()
        } else {
            Vec::new()
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (col, c) in self.columns.iter().zip(row) {
                    let v = match c {
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Num(s) => s
                            .parse::<f64>()
                            .ok()
                            .and_then(serde_json::Number::from_f64)
                            .map(Value::Number)
                            .unwrap_or(Value::Null),
                        Cell::Int(i) => Value::from(*i),
                        Cell::Bool(b) => Value::Bool(*b),
                        Cell::Missing => Value::Null,
                    };
                    m.insert((*col).to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Array(meta));
        doc.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
        writeln!(out)?;
        Ok(())
    }
}
