use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_monoidlab");
const GOLDEN_OD6: &str = include_str!("../../core/tests/golden/od6_quiver.dot");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("MONOIDLAB_MAX_N").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Checks `value` against the keyword subset used by the shipped schemas.
fn validate(value: &Value, schema: &Value, root: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").ok_or_else(|| format!("unsupported ref {r}"))?;
        return validate(value, &root["$defs"][name], root, path);
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matches = options.iter().filter(|s| validate(value, s, root, path).is_ok()).count();
        if matches != 1 {
            return Err(format!("{path}: {matches} oneOf branches match"));
        }
    }
    if let Some(choices) = schema.get("enum").and_then(Value::as_array) {
        if !choices.contains(value) {
            return Err(format!("{path}: {value} not in enum"));
        }
    }
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: bad type keyword")),
        };
        let ok = types.iter().any(|&t| match t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "integer" => value.is_i64() || value.is_u64(),
            "null" => value.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("{path}: expected {types:?}, got {value}"));
        }
    }
    if let (Some(min), Some(v)) = (schema.get("minimum").and_then(Value::as_i64), value.as_i64()) {
        if v < min {
            return Err(format!("{path}: {v} < {min}"));
        }
    }
    if let (Some(p), Some(s)) = (schema.get("pattern").and_then(Value::as_str), value.as_str()) {
        assert_eq!(p, "^[01]*$", "only the bitmask pattern is supported");
        if !s.chars().all(|c| c == '0' || c == '1') {
            return Err(format!("{path}: {s} does not match {p}"));
        }
    }
    if let Some(obj) = value.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        for req in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = req.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        for (k, v) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(s) => validate(v, s, root, &format!("{path}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected key {k}"));
                }
                None => {}
            }
        }
    }
    if let Some(arr) = value.as_array() {
        let len = arr.len() as u64;
        if schema.get("minItems").and_then(Value::as_u64).is_some_and(|m| len < m)
            || schema.get("maxItems").and_then(Value::as_u64).is_some_and(|m| len > m)
        {
            return Err(format!("{path}: array length {len} out of bounds"));
        }
        if schema.get("uniqueItems") == Some(&Value::Bool(true)) {
            for (i, a) in arr.iter().enumerate() {
                if arr[..i].contains(a) {
                    return Err(format!("{path}: duplicate item {a}"));
                }
            }
        }
        if let Some(items) = schema.get("items") {
            for (i, v) in arr.iter().enumerate() {
                validate(v, items, root, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn schema(command: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{command}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check_schema(command: &str, args: &[&str]) {
    let mut all = vec![command];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--format", "json"]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{all:?}: {}", String::from_utf8_lossy(&o.stderr));
    let value: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = schema(command);
    if let Err(e) = validate(&value, &s, &s, "$") {
        panic!("{all:?} violates its schema: {e}");
    }
}

#[test]
fn schema_checker_rejects_bad_documents() {
    let s = schema("homdims");
    let good: Value = serde_json::json!({"n": 2, "monoid": "OD", "pairs": [{"Y": [1], "X": [1], "dim": 1, "h_tilde": 1}]});
    assert!(validate(&good, &s, &s, "$").is_ok());
    let missing = serde_json::json!({"n": 2, "monoid": "OD"});
    assert!(validate(&missing, &s, &s, "$").is_err());
    let extra = serde_json::json!({"n": 2, "monoid": "OD", "pairs": [], "x": 1});
    assert!(validate(&extra, &s, &s, "$").is_err());
    let wrong_kind = serde_json::json!({"n": 2, "monoid": "Op", "pairs": []});
    assert!(validate(&wrong_kind, &s, &s, "$").is_err());
    let negative = serde_json::json!({"n": 2, "monoid": "OD", "pairs": [{"Y": [1], "X": [1], "dim": -1, "h_tilde": 1}]});
    assert!(validate(&negative, &s, &s, "$").is_err());
}

#[test]
fn json_outputs_validate_against_schemas() {
    for monoid in ["od", "cod"] {
        check_schema("sizes", &["--monoid", monoid, "--n", "4"]);
        check_schema("eggbox", &["--monoid", monoid, "--n", "4", "--k", "2"]);
        check_schema("sandwich", &["--monoid", monoid, "--n", "4", "--k", "3"]);
        check_schema("homdims", &["--monoid", monoid, "--n", "3"]);
        check_schema("relations", &["--monoid", monoid, "--n", "4"]);
        check_schema("quiver", &["--monoid", monoid, "--n", "4"]);
        check_schema("verify-all", &["--monoid", monoid, "--n", "3"]);
    }
    check_schema("sizes", &["--monoid", "op", "--n", "5"]);
    check_schema("eggbox", &["--monoid", "op", "--n", "4", "--k", "2"]);
    check_schema("quiver", &["--monoid", "op", "--n", "4"]);
    check_schema("verify-all", &["--monoid", "op", "--n", "3"]);
    check_schema("cod-decompose", &["--n", "3"]);
}

#[test]
fn sizes_od5() {
    let o = run(&["sizes", "--monoid", "od", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("|OD_5| = 247\n"));
    let j = run(&["sizes", "--monoid", "od", "--n", "5", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["size"], 247);
    assert_eq!(v["op_brute_force"], 126);
}

#[test]
fn od6_dot_matches_golden_figure() {
    let o = run(&["quiver", "--monoid", "od", "--n", "6", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), GOLDEN_OD6);
}

#[test]
fn verify_all_cod4_succeeds() {
    let o = run(&["verify-all", "--monoid", "cod", "--n", "4", "--prime", "10007"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let cases: &[&[&str]] = &[
        &["sizes", "--monoid", "cod", "--n", "5", "--format", "json"],
        &["eggbox", "--monoid", "od", "--n", "5", "--k", "3"],
        &["sandwich", "--monoid", "cod", "--n", "5", "--k", "2", "--format", "json"],
        &["homdims", "--monoid", "cod", "--n", "4", "--format", "json"],
        &["relations", "--monoid", "od", "--n", "5"],
        &["quiver", "--monoid", "cod", "--n", "5", "--format", "json"],
        &["quiver", "--monoid", "od", "--n", "5", "--format", "dot"],
        &["cod-decompose", "--n", "4", "--format", "json"],
        &["verify-all", "--monoid", "od", "--n", "4", "--format", "json"],
    ];
    for args in cases {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?} is not deterministic");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    let args = ["quiver", "--monoid", "od", "--n", "4", "--format", "json"];
    let direct = run(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend_from_slice(&["--out", p]);
    let o = run(&with_out);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["sizes"],
        &["sizes", "--n", "3", "--monoid", "xyz"],
        &["nonsense", "--n", "3"],
        &["sizes", "--n", "3", "--format", "dot"],
        &["eggbox", "--n", "3", "--k", "4"],
        &["eggbox", "--n", "3", "--k", "0"],
        &["sizes", "--n", "3", "--prime", "2"],
        &["sizes", "--n", "3", "--prime", "9"],
        &["sizes", "--n", "9"],
        &["sizes", "--n", "0"],
        &["homdims", "--n", "7"],
        &["homdims", "--monoid", "op", "--n", "3"],
        &["quiver", "--n", "5", "--prime", "7"],
        &["cod-decompose", "--monoid", "od", "--n", "3"],
        &["cod-decompose", "--n", "6"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty(), "{args:?} gave no message");
    }
}

#[test]
fn trace_form_refusal_names_the_dimension() {
    let o = run(&["quiver", "--monoid", "od", "--n", "5", "--prime", "7"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("p = 7") && err.contains("dim = 16"), "{err}");
}

#[test]
fn max_n_env_raises_caps() {
    let o = Command::new(BIN).args(["sizes", "--monoid", "op", "--n", "9"]).env("MONOIDLAB_MAX_N", "9").output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("|Op_9| = 24310\n"));
}

#[test]
fn verbose_reports_timing_on_stderr() {
    let o = run(&["sizes", "--n", "3", "-v"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("finished in"));
}
