//! The report JSON schema and a structural validator for it.
//!
//! The validator covers exactly the constraints the schema states, plus the
//! cross-field rules the schema language cannot express (row keys are
//! declared columns, timings are parallel to rows, status agrees with the
//! alerts).

use serde_json::Value;

use crate::report::REPORT_SCHEMA;

pub const SCHEMA_JSON: &str = include_str!("../data/report.schema.json");

pub const COMMANDS: [&str; 6] =
    ["enumerate", "tables", "scan-genus4", "scan-superelliptic", "verify-lattices", "audit-bounds"];

const TOP_KEYS: [&str; 8] = ["schema", "command", "parameters", "columns", "rows", "alerts", "status", "timings"];

pub fn validate(doc: &Value) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    let Some(obj) = doc.as_object() else {
        return Err(vec!["report is not an object".into()]);
    };
    for k in obj.keys() {
        if !TOP_KEYS.contains(&k.as_str()) {
            errs.push(format!("unknown key {k}"));
        }
    }
    for k in &TOP_KEYS[..7] {
        if !obj.contains_key(*k) {
            errs.push(format!("missing key {k}"));
        }
    }
    if obj.get("schema").and_then(Value::as_str) != Some(REPORT_SCHEMA) {
        errs.push("schema is not optcurve-report/v1".into());
    }
    match obj.get("command").and_then(Value::as_str) {
        Some(c) if COMMANDS.contains(&c) => {}
        _ => errs.push("unknown command".into()),
    }
    if obj.get("parameters").is_some_and(|p| !p.is_object()) {
        errs.push("parameters is not an object".into());
    }
    let mut columns: Vec<&str> = Vec::new();
    match obj.get("columns").and_then(Value::as_array) {
        Some(cols) => {
            for c in cols {
                match c.as_str() {
                    Some(s) if !columns.contains(&s) => columns.push(s),
                    Some(s) => errs.push(format!("duplicate column {s}")),
                    None => errs.push("column name is not a string".into()),
                }
            }
        }
        None => errs.push("columns is not an array".into()),
    }
    let rows = obj.get("rows").and_then(Value::as_array);
    match rows {
        Some(rows) => {
            for (i, r) in rows.iter().enumerate() {
                match r.as_object() {
                    Some(r) => {
                        for k in r.keys() {
                            if !columns.contains(&k.as_str()) {
                                errs.push(format!("row {i}: undeclared column {k}"));
                            }
                        }
                    }
                    None => errs.push(format!("row {i} is not an object")),
                }
            }
        }
        None => errs.push("rows is not an array".into()),
    }
    let mut blocking = 0;
    match obj.get("alerts").and_then(Value::as_array) {
        Some(alerts) => {
            for (i, a) in alerts.iter().enumerate() {
                let Some(a) = a.as_object() else {
                    errs.push(format!("alert {i} is not an object"));
                    continue;
                };
                if a.len() != 3 || !["subject", "message"].iter().all(|k| a.get(*k).is_some_and(Value::is_string)) {
                    errs.push(format!("alert {i} must have exactly kind, subject, message"));
                }
                match a.get("kind").and_then(Value::as_str) {
                    Some("falsification" | "flag") => blocking += 1,
                    Some("expected-flag") => {}
                    _ => errs.push(format!("alert {i}: bad kind")),
                }
            }
        }
        None => errs.push("alerts is not an array".into()),
    }
    match obj.get("status").and_then(Value::as_str) {
        Some("confirmed") if blocking > 0 => errs.push("status confirmed with blocking alerts".into()),
        Some("falsified") if blocking == 0 => errs.push("status falsified without blocking alerts".into()),
        Some("confirmed" | "falsified") => {}
        _ => errs.push("bad status".into()),
    }
    if let Some(t) = obj.get("timings") {
        let ok = t.as_object().is_some_and(|t| {
            t.len() == 2
                && t.get("total_seconds").and_then(Value::as_f64).is_some_and(|x| x >= 0.0)
                && t.get("row_seconds").and_then(Value::as_array).is_some_and(|a| {
                    a.iter().all(|x| x.as_f64().is_some_and(|x| x >= 0.0)) && rows.is_none_or(|r| r.len() == a.len())
                })
        });
        if !ok {
            errs.push("malformed timings".into());
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
