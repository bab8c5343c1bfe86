use std::path::Path;
use std::process::{Command, Output};

use optcurve::report::parse_tsv;
use optcurve::schema::{validate, SCHEMA_JSON};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optcurve"))
        .args(args)
        .env_remove("OPTCURVE_CATALOG")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn schema_check(doc: &Value) {
    let schema: Value = serde_json::from_str(SCHEMA_JSON).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errs: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errs.is_empty(), "{errs:?}");
    validate(doc).unwrap();
}

#[test]
fn enumerate_lists_fields() {
    let o = run(&["enumerate", "-d", "-19", "--qmax", "150"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    schema_check(&doc);
    let qs: Vec<u64> = doc["rows"].as_array().unwrap().iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, [47, 61, 137]);
    assert_eq!(doc["columns"], serde_json::json!(["q", "p", "n", "m", "d"]));

    let o = run(&["enumerate", "-d", "-11"]);
    let rows = json(&o)["rows"].as_array().unwrap().len();
    assert_eq!(rows, 13);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["enumerate", "-d", "-5"][..],
        &["enumerate"],
        &["frobnicate"],
        &["--format", "xml", "enumerate", "-d", "-3"],
        &["scan-genus4", "-d", "-7"],
        &["tables", "-d", "-3"],
        &["enumerate", "-d", "-3", "--qmax", "99999999999"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn missing_or_tampered_catalog_exits_3() {
    let o = run(&["--catalog", "/nonexistent/catalog.json", "verify-lattices"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("catalog"));

    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let path = dir.path().join("catalog.json");
    let text = std::fs::read_to_string(src.join("catalog.json")).unwrap();
    std::fs::write(&path, &text).unwrap();
    // No sidecar yet.
    assert_eq!(code(&run(&["--catalog", path.to_str().unwrap(), "audit-bounds"])), 3);
    std::fs::copy(src.join("catalog.json.sha256"), dir.path().join("catalog.json.sha256")).unwrap();
    assert_eq!(code(&run(&["--catalog", path.to_str().unwrap(), "audit-bounds"])), 0);
    std::fs::write(&path, format!("{text} ")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_optcurve"))
        .args(["audit-bounds"])
        .env("OPTCURVE_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn strict_exit_codes_follow_alerts() {
    let o = run(&["--strict", "audit-bounds"]);
    assert_eq!(code(&o), 0, "only the two expected flags are raised");
    let doc = json(&o);
    schema_check(&doc);
    let kinds: Vec<&str> = doc["alerts"].as_array().unwrap().iter().map(|a| a["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["expected-flag", "expected-flag"]);
    assert_eq!(doc["status"], "confirmed");

    let o = run(&["verify-lattices"]);
    assert_eq!(code(&o), 0);
    let o = run(&["--strict", "verify-lattices"]);
    assert_eq!(code(&o), 1);
    let doc = json(&o);
    schema_check(&doc);
    assert_eq!(doc["status"], "falsified");

    let o = run(&["--strict", "scan-genus4", "-d", "-19", "--qmax", "200"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    schema_check(&doc);
    for r in doc["rows"].as_array().unwrap() {
        assert_eq!(r["witnesses"], serde_json::json!([]));
    }
}

#[test]
fn output_is_identical_across_thread_counts() {
    for cmd in [
        &["tables", "-d", "-11"][..],
        &["scan-genus4", "-d", "-11", "--qmax", "1500"],
        &["scan-superelliptic", "--qmax", "70"],
        &["verify-lattices"],
        &["tables", "-d", "-19", "--qmax", "300"],
    ] {
        let outs: Vec<Vec<u8>> = ["1", "3"]
            .iter()
            .map(|t| {
                let mut args = vec!["--threads", t];
                args.extend_from_slice(cmd);
                run(&args).stdout
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{cmd:?}");
        schema_check(&serde_json::from_slice(&outs[0]).unwrap());
    }
}

#[test]
fn tsv_matches_json_rows() {
    for cmd in [&["tables", "-d", "-11"][..], &["verify-lattices"], &["audit-bounds"]] {
        let doc = json(&run(cmd));
        let mut args = vec!["--format", "tsv"];
        args.extend_from_slice(cmd);
        let tsv = String::from_utf8(run(&args).stdout).unwrap();
        let (cols, rows) = parse_tsv(&tsv).unwrap();
        let want_cols: Vec<String> = serde_json::from_value(doc["columns"].clone()).unwrap();
        assert_eq!(cols, want_cols);
        assert_eq!(Value::from(rows.into_iter().map(Value::Object).collect::<Vec<_>>()), doc["rows"]);
    }
}

#[test]
fn output_file_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["--timings", "-o", path.to_str().unwrap(), "enumerate", "-d", "-8", "--qmax", "500"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    schema_check(&doc);
    assert_eq!(doc["timings"]["row_seconds"].as_array().unwrap().len(), doc["rows"].as_array().unwrap().len());
    assert!(json(&run(&["enumerate", "-d", "-8"])).get("timings").is_none());
}

#[test]
fn tables_report_printed_failures_with_errata() {
    let doc = json(&run(&["tables", "-d", "-11"]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 33);
    let failing: Vec<(String, u64)> = rows
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| (r["kind"].as_str().unwrap().to_string(), r["q"].as_u64().unwrap()))
        .collect();
    assert_eq!(
        failing,
        [("elliptic-minimal".to_string(), 6323), ("genus2".to_string(), 1193), ("genus2".to_string(), 6323)]
    );
    for r in rows.iter().filter(|r| r["pass"] == false) {
        assert_eq!(r["erratum_pass"], true);
    }
}
