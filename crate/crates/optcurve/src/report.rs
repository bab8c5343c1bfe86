//! The report document shared by every subcommand, and its TSV rendering.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const REPORT_SCHEMA: &str = "optcurve-report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlertKind {
    /// A computation contradicts a printed claim or table entry.
    Falsification,
    /// An audit flag outside the known list of printed discrepancies.
    Flag,
    /// One of the known printed discrepancies.
    ExpectedFlag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alert {
    pub kind: AlertKind,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Confirmed,
    Falsified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    /// Parallel to `rows`.
    pub row_seconds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Map<String, Value>>,
    pub alerts: Vec<Alert>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn new(command: &str, parameters: Map<String, Value>, columns: &[&str]) -> Self {
        Report {
            schema: REPORT_SCHEMA.into(),
            command: command.into(),
            parameters,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            alerts: Vec::new(),
            status: Status::Confirmed,
            timings: None,
        }
    }

    /// Adds a row; keys must be declared columns.
    pub fn push(&mut self, row: Map<String, Value>) {
        debug_assert!(row.keys().all(|k| self.columns.contains(k)), "undeclared column in {row:?}");
        self.rows.push(row);
    }

    pub fn alert(&mut self, kind: AlertKind, subject: impl Into<String>, message: impl Into<String>) {
        self.alerts.push(Alert { kind, subject: subject.into(), message: message.into() });
        if kind != AlertKind::ExpectedFlag {
            self.status = Status::Falsified;
        }
    }

    /// Alerts that make `--strict` exit nonzero.
    pub fn blocking_alerts(&self) -> usize {
        self.alerts.iter().filter(|a| a.kind != AlertKind::ExpectedFlag).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Header line of column names, then one line per row with every cell
    /// JSON-encoded (missing cells are `null`).
    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|c| serde_json::to_string(row.get(c).unwrap_or(&Value::Null)).expect("cell serializes"))
                .collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TsvError {
    #[error("empty document")]
    Empty,
    #[error("line {line}: expected {expected} cells, found {found}")]
    Width { line: usize, expected: usize, found: usize },
    #[error("line {line}, column {column}: {message}")]
    Cell { line: usize, column: String, message: String },
}

/// Header and rows of a parsed TSV report.
pub type TsvTable = (Vec<String>, Vec<Map<String, Value>>);

/// Inverse of [`Report::to_tsv`]: the columns and rows, with `null` cells
/// dropped so rows compare equal to the JSON form.

pub fn parse_tsv(text: &str) -> Result<TsvTable, TsvError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(TsvError::Empty)?;
    let columns: Vec<String> = header.split('\t').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != columns.len() {
            return Err(TsvError::Width { line: i + 2, expected: columns.len(), found: cells.len() });
        }
        let mut row = Map::new();
        for (c, cell) in columns.iter().zip(cells) {
            let v: Value = serde_json::from_str(cell).map_err(|e| TsvError::Cell {
                line: i + 2,
                column: c.clone(),
                message: e.to_string(),
            })?;
            if !v.is_null() {
                row.insert(c.clone(), v);
            }
        }
        rows.push(row);
    }
    Ok((columns, rows))
}

/// Builds a row map from `(column, value)` pairs, skipping nulls.
#[macro_export]
macro_rules! row {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(
            let v = serde_json::to_value($v).expect("row value serializes");
            if !v.is_null() {
                m.insert(String::from($k), v);
            }
        )*
        m
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tsv_roundtrip() {
        let mut r = Report::new("t", Map::new(), &["a", "b", "c"]);
        r.push(row!("a" => 1, "b" => "x\ty", "c" => json!({"k": [1, 2]})));
        r.push(row!("a" => 2, "c" => Option::<u8>::None));
        let (cols, rows) = parse_tsv(&r.to_tsv()).unwrap();
        assert_eq!(cols, r.columns);
        assert_eq!(rows, r.rows);
    }

    #[test]
    fn expected_flags_do_not_falsify() {
        let mut r = Report::new("t", Map::new(), &[]);
        r.alert(AlertKind::ExpectedFlag, "x", "y");
        assert_eq!(r.status, Status::Confirmed);
        r.alert(AlertKind::Flag, "x", "y");
        assert_eq!((r.status, r.blocking_alerts()), (Status::Falsified, 1));
    }
}
