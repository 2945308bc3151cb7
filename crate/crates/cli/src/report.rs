use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use encouple::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rows printed for `--format csv`.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut out = String::new();
        let line = |cells: &[String]| cells.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "{}", line(&self.header));
        for r in &self.rows {
            let _ = writeln!(out, "{}", line(r));
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub results: Value,
    pub checks: BTreeMap<String, bool>,
    pub table: Table,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: Map::new(),
            results: Value::Null,
            checks: BTreeMap::new(),
            table: Table::default(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), v.into());
        self
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_owned(), ok);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn envelope(&self, tol: &Tolerances) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "tolerances": tolerances(tol),
            "checks": self.checks,
            "passed": self.passed(),
        })
    }

    pub fn render(&self, format: Format, tol: &Tolerances) -> String {
        match format {
            Format::Json => format!("{}\n", self.envelope(tol)),
            Format::Csv => self.table.render(),
        }
    }
}

pub fn tolerances(tol: &Tolerances) -> Value {
    json!({ "cmp": tol.cmp, "norm": tol.norm })
}

/// Round to 12 significant digits.
pub fn sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

pub fn sig_str(x: f64) -> String {
    sig(x).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig(std::f64::consts::FRAC_1_SQRT_2), 0.707106781187);
        assert_eq!(sig(-0.0), 0.0);
        assert_eq!(sig(1.0), 1.0);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
        assert_eq!(csv_cell("+XZ"), "+XZ");
    }
}
