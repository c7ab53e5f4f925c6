use std::collections::HashMap;
use std::process::Command;

use cfdim::cli::{run_with_env, Outcome};
use regex::Regex;
use serde_json::Value;

fn cfdim(args: &[&str]) -> Outcome {
    cfdim_env(args, &HashMap::new())
}

fn cfdim_env(args: &[&str], env: &HashMap<String, String>) -> Outcome {
    let mut argv = vec!["cfdim"];
    argv.extend_from_slice(args);
    run_with_env(argv, env)
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is one JSON document")
}

fn schema() -> Value {
    serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap()
}

/// Checks `v` against the schema keywords the published schema uses.
fn validate(v: &Value, s: &Value, root: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local refs only");
        return validate(v, &root["$defs"][name], root, path);
    }
    if let Some(all) = s.get("allOf").and_then(Value::as_array) {
        for sub in all {
            validate(v, sub, root, path)?;
        }
    }
    if let Some(options) = s.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Some(t) = s.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "boolean" => v.is_boolean(),
            "integer" => v.as_number().is_some_and(|n| !n.to_string().contains(['.', 'e', 'E'])),
            other => panic!("type {other} not used by the schema"),
        };
        if !ok {
            return Err(format!("{path}: expected {t}, got {v}"));
        }
    }
    if let (Some(p), Some(text)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
        if !Regex::new(p).unwrap().is_match(text) {
            return Err(format!("{path}: {text:?} does not match {p}"));
        }
    }
    if let (Some(min), Some(n)) = (s.get("minimum").and_then(Value::as_i64), v.as_number()) {
        if n.to_string().parse::<f64>().unwrap() < min as f64 {
            return Err(format!("{path}: {n} below {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing {key}"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (key, val) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => validate(val, sub, root, &format!("{path}.{key}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected key {key}"));
                }
                None => {}
            }
        }
    }
    if let Some(items) = v.as_array() {
        if let Some(sub) = s.get("items") {
            for (i, item) in items.iter().enumerate() {
                validate(item, sub, root, &format!("{path}[{i}]"))?;
            }
        }
        if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                return Err(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = s.get("maxItems").and_then(Value::as_u64) {
            if (items.len() as u64) > max {
                return Err(format!("{path}: more than {max} items"));
            }
        }
    }
    Ok(())
}

fn check(command: &str, args: &[&str]) -> Value {
    let root = schema();
    let v = json(&cfdim(args));
    let s = &root["commands"][command];
    assert!(!s.is_null(), "no schema for {command}");
    if let Err(e) = validate(&v, s, &root, command) {
        panic!("{command} output violates the schema: {e}\n{v}");
    }
    v
}

#[test]
fn spec_examples() {
    assert_eq!(cfdim(&["expand", "7/10"]).stdout, "{\"word\":[1,2,3]}\n");
    assert_eq!(cfdim(&["count", "D:l=5,n=5"]).stdout, "{\"count\":\"126\"}\n");
    let v = json(&cfdim(&["psi", "alog:2", "--predict"]));
    assert_eq!(v["E_sup_Lambda"], "0.25");
}

#[test]
fn outputs_match_schema() {
    check("expand", &["expand", "355/1000"]);
    check("convergents", &["convergents", "[1,2,3,4]"]);
    check("cylinder", &["cylinder", "2 2 7"]);
    check("count", &["count", "A:alpha1=1,alpha2=1.5,eps=0.1,k=6"]);
    check("enumerate", &["enumerate", "C:alpha=1,eps=0.5,k=4"]);
    check("psi", &["psi", "exp:3", "--constants", "--predict", "--N", "64"]);
    check("psi", &["psi", "2*n", "--predict"]);
    check("construct-point", &["construct", "point", "--t", "power:3", "--N", "20", "--rule", "mid"]);
    check("construct-point", &["construct", "point", "--t", "d:3,0.1,exp:3", "--N", "6", "--approx"]);
    check("construct-xtilde", &["construct", "xtilde", "n", "--N", "30", "--stats", "n"]);
    check("construct-fset", &["construct", "fset", "--a", "2", "--b", "1.5", "--N", "12", "--compact"]);
    check("construct-dseq", &["construct", "dseq", "exp:3", "--A", "3", "--eps", "0.1", "--N", "20"]);
    check("cover-sum", &["cover-sum", "bounded:digits=1,2", "--k", "6", "--s", "0.5"]);
    check("critical", &["critical", "bounded:digits=1,2", "--k", "4,6"]);
    check("critical", &["critical", "D:l=1", "--k", "3"]);
    check("mc-growth", &["mc-growth", "--samples", "4", "--N", "100", "--seed", "3"]);
    check("config", &["config"]);
}

#[test]
fn exit_codes() {
    let out = cfdim(&["frobnicate"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("Usage"));
    assert!(out.stdout.is_empty());

    assert_eq!(cfdim(&["expand", "7/0"]).code, 1);
    assert_eq!(cfdim(&["expand", "--max-n"]).code, 1);
    assert_eq!(cfdim(&["psi", "n + foo(n)"]).code, 1);

    let out = cfdim(&["enumerate", "bounded:digits=1,2,3,k=12", "--budget-words", "1000"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    let out = cfdim(&["construct", "fset", "--a", "3", "--b", "3", "--N", "30"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("budget"));

    let help = cfdim(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("mc-growth"));
}

#[test]
fn csv_output() {
    let out = cfdim(&["critical", "bounded:digits=1,2", "--k", "4,5", "--format", "csv"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "k,s_star,s_lo,s_hi");
    assert!(lines[1].starts_with("4,") && lines[2].starts_with("5,"));

    let out = cfdim(&["enumerate", "D:l=2,n=2", "--format", "csv"]);
    assert_eq!(out.stdout, "a1,a2\n1,1\n1,2\n2,2\n");

    assert_eq!(cfdim(&["count", "D:l=2,n=2", "--format", "csv"]).code, 1);
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfdim.conf");
    std::fs::write(&path, "# settings\nseed = 11\nprecision = 96\nbudget_words = 500\n").unwrap();
    let p = path.to_str().unwrap();

    let v = json(&cfdim(&["config", "--config", p]));
    assert_eq!(v["seed"], "11");
    assert_eq!(v["precision"], "96");
    assert_eq!(v["budget_words"], "500");

    let env: HashMap<String, String> = [("CFDIM_SEED".to_string(), "12".to_string())].into();
    let v = json(&cfdim_env(&["config", "--config", p], &env));
    assert_eq!(v["seed"], "12");
    let v = json(&cfdim_env(&["config", "--config", p, "--seed", "13"], &env));
    assert_eq!(v["seed"], "13");

    let env: HashMap<String, String> = [("CFDIM_PRECISION".to_string(), "32".to_string())].into();
    assert_eq!(cfdim_env(&["config"], &env).code, 1);

    std::fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(cfdim(&["config", "--config", p]).code, 1);
}

#[test]
fn seed_drives_mc() {
    let a = cfdim(&["mc-growth", "--samples", "5", "--N", "100", "--seed", "1"]);
    let env: HashMap<String, String> = [("CFDIM_SEED".to_string(), "1".to_string())].into();
    let b = cfdim_env(&["mc-growth", "--samples", "5", "--N", "100"], &env);
    assert_eq!(a, b);
    let c = cfdim(&["mc-growth", "--samples", "5", "--N", "100", "--seed", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn binary_runs_are_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_cfdim");
    let args = ["mc-growth", "--samples", "16", "--N", "120", "--seed", "5"];
    let first = Command::new(bin).args(args).output().unwrap();
    let second = Command::new(bin).args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let bad = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
