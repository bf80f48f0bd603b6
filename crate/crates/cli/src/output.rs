//! Tabular output. CSV carries a `#` metadata prologue; JSON mirrors the
//! same payload. Floats are printed with 12 significant digits.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// `{:.11e}` is locale-free and always yields 12 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.11e}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

pub const fn col(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_sha256: String,
}

impl Meta {
    pub fn new(command: String, config_bytes: &[u8]) -> Self {
        let config_sha256 = hex::encode(Sha256::digest(config_bytes));
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_sha256,
        }
    }
}

pub fn write_table(out: &mut dyn Write, format: Format, meta: &Meta, table: &Table) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, meta, table),
        Format::Json => write_json(out, meta, table),
    }
}

fn write_csv(out: &mut dyn Write, meta: &Meta, table: &Table) -> Result<()> {
    writeln!(out, "# {} {}", meta.tool, meta.version)?;
    writeln!(out, "# command: {}", meta.command)?;
    writeln!(out, "# config_sha256: {}", meta.config_sha256)?;
    let units: Vec<String> = table.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)).collect();
    writeln!(out, "# units: {}", units.join(" "))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(table.columns.iter().map(|c| c.name))?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(out: &mut dyn Write, meta: &Meta, table: &Table) -> Result<()> {
    #[derive(Serialize)]
    struct Payload<'a> {
        meta: &'a Meta,
        columns: &'a [Column],
        rows: &'a [Vec<Cell>],
    }
    serde_json::to_writer_pretty(
        &mut *out,
        &Payload {
            meta,
            columns: &table.columns,
            rows: &table.rows,
        },
    )?;
    out.write_all(b"\n")?;
    Ok(())
}
