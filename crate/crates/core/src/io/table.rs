use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Int(v) => write!(out, "{v}"),
            // 17 significant digits: exact f64 round trip
            Cell::Float(v) => write!(out, "{v:.16e}"),
            Cell::Bool(v) => write!(out, "{v}"),
        }
        .expect("writing to a String");
    }
}

/// Fixed-schema table written as CSV with a JSON metadata sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Value,
    /// Columns whose values must lie in `[0, 1]`.
    pub probability_columns: Vec<String>,
}

impl ResultTable {
    pub fn new(name: impl Into<String>, columns: &[&str], probability_columns: &[&str]) -> Self {
        ResultTable {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Value::Null,
            probability_columns: probability_columns.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidArgument(format!(
                "row of {} cells for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        for col in &self.probability_columns {
            let idx = self.column(col).expect("probability column is declared");
            if let Cell::Float(v) = row[idx] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!(
                        "probability column {col} got {v}"
                    )));
                }
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn float(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Bool(_) => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{}.csv", self.name)), self.to_csv())?;
        let meta = serde_json::to_string_pretty(&self.metadata)?;
        fs::write(dir.join(format!("{}.json", self.name)), meta + "\n")?;
        Ok(())
    }
}
