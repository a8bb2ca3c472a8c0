use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One CSV section of a report.
pub struct Table {
    name: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows }
    }
}

/// A report rendered either as one JSON document or as CSV tables.
pub struct Output {
    json: Value,
    tables: Vec<Table>,
}

impl Output {
    pub fn new(json: Value) -> Self {
        Output { json, tables: Vec::new() }
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut text = serde_json::to_vec_pretty(&self.json)?;
                text.push(b'\n');
                Ok(text)
            }
            Format::Csv => {
                let single = self.tables.len() == 1;
                let mut out = Vec::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push(b'\n');
                    }
                    // Sections are introduced by a comment line when there are several.
                    if !single {
                        writeln!(out, "# {}", t.name)?;
                    }
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(&t.header)?;
                    for row in &t.rows {
                        w.write_record(row)?;
                    }
                    w.flush()?;
                }
                Ok(out)
            }
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let bytes = self.render(format)?;
        match path {
            Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(&bytes)?;
                Ok(stdout.flush()?)
            }
        }
    }
}
