//! Plain tables and their CSV/JSON rendering with fixed number formatting.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Rounds to 4 decimals and drops trailing zeros: `0.65320` → `0.6532`,
/// `2.0` → `2`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mut s = format!("{v:.4}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(v) if v.is_finite() => {
                // Round-trip through the fixed text form so JSON and CSV agree.
                let n: f64 = format_number(*v).parse().unwrap_or(*v);
                serde_json::Number::from_f64(n).map(Value::Number).unwrap_or(Value::Null)
            }
            Cell::Num(v) => Value::String(format_number(*v)),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    /// Describes where the numbers come from; written as a comment in CSV.
    pub source: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(source: impl Into<String>, header: Vec<&'static str>) -> Self {
        Table {
            source: source.into(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, with_source: bool) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                if with_source {
                    for line in self.source.lines() {
                        let _ = writeln!(out, "# {line}");
                    }
                }
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.text())).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = Map::new();
                        for (k, c) in self.header.iter().zip(row) {
                            obj.insert(k.to_string(), c.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let value = if with_source {
                    let mut obj = Map::new();
                    obj.insert("source".into(), Value::String(self.source.clone()));
                    obj.insert("rows".into(), Value::Array(rows));
                    Value::Object(obj)
                } else {
                    Value::Array(rows)
                };
                let mut s = serde_json::to_string_pretty(&value).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.65321), "0.6532");
        assert_eq!(format_number(2.0), "2");
        assert_eq!(format_number(18.50999), "18.51");
        assert_eq!(format_number(-0.00001), "0");
        assert_eq!(format_number(1234.5), "1234.5");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new("src", vec!["name", "value"]);
        t.push(vec!["a,b".into(), 1.23456.into()]);
        assert_eq!(t.render(Format::Csv, true), "# src\nname,value\n\"a,b\",1.2346\n");
        let j: Value = serde_json::from_str(&t.render(Format::Json, false)).unwrap();
        assert_eq!(j[0]["value"], 1.2346);
    }
}
