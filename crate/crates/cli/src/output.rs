//! Tabular output. CSV numbers use 17 significant digits so identical runs
//! give byte-identical files; JSON holds a metadata object and a records
//! array.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

/// Named numeric columns. Columns listed as integer are printed without
/// exponent; everything else gets 17 significant digits.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub integer: Vec<bool>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            integer: vec![false; columns.len()],
            columns,
            rows: Vec::new(),
        }
    }

    pub fn with_integer(mut self, names: &[&str]) -> Self {
        for (flag, c) in self.integer.iter_mut().zip(&self.columns) {
            *flag = names.contains(c);
        }
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 17 significant digits; −0 prints as 0.
pub fn format_number(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub fn csv(metadata: &[(String, String)], tables: &[(&str, &Table)]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    for (i, (name, table)) in tables.iter().enumerate() {
        if i > 0 {
            writeln!(out, "# {name}").unwrap();
        }
        writeln!(out, "{}", table.columns.join(",")).unwrap();
        for row in &table.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&table.integer)
                .map(|(v, &int)| if int { format!("{}", *v as i64) } else { format_number(*v) })
                .collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
    }
    out
}

fn records(table: &Table) -> Value {
    Value::Array(
        table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = table
                    .columns
                    .iter()
                    .zip(row)
                    .zip(&table.integer)
                    .map(|((c, v), &int)| (c.to_string(), if int { json!(*v as i64) } else { json!(v) }))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn json(metadata: &[(String, String)], tables: &[(&str, &Table)]) -> String {
    let meta: Map<String, Value> = metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let mut top = Map::new();
    top.insert("metadata".into(), Value::Object(meta));
    for (name, table) in tables {
        top.insert(name.to_string(), records(table));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(top)).unwrap();
    text.push('\n');
    text
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}
