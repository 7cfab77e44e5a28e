use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sandwich-tn"));
    c.env_remove("SANDWICH_TN_MAX_SCAN");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, err) = run(&all);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}")))
}

/// Every string that looks like a transformation, partition or point set.
fn collect_strings<'a>(v: &'a Value, out: &mut Vec<&'a str>) {
    match v {
        Value::String(s) => out.push(s),
        Value::Array(a) => a.iter().for_each(|x| collect_strings(x, out)),
        Value::Object(o) => o.values().for_each(|x| collect_strings(x, out)),
        _ => {}
    }
}

#[test]
fn iso_example() {
    let (code, out, _) = run(&["iso", "[1,1,3]", "[3,3,1]"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "isomorphic: true");
}

#[test]
fn count_rank_one() {
    let (code, v) = json(&["count", "[1,1,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["counts"]["formula"], 7);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn verify_identity_of_degree_two() {
    let (code, v) = json(&["verify", "[1,2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    let (code, out, _) = run(&["verify", "[1,2]"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: pass"));
}

#[test]
fn verify_reports_skips_and_pruned_search() {
    let (code, v) = json(&["verify", "[1,1,3,4]"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "partial(skips)");
    assert_eq!(v["isolated"]["status"], "skipped");
    let (code, v) = json(&["verify", "[1,1,3,4]", "--pruned"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["isolated"]["oracle_count"], 101);
}

#[test]
fn malformed_alpha() {
    let (code, _, err) = run(&["info", "[1,5,2]"]);
    assert_eq!(code, 2);
    assert!(err.contains("entry 2"), "{err}");
    let (code, _, _) = run(&["count", "1,2"]);
    assert_eq!(code, 2);
}

#[test]
fn scan_guard_from_environment() {
    let out = bin().args(["classify", "[1,1,3]"]).env("SANDWICH_TN_MAX_SCAN", "5").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let (code, _, _) = run(&["classify", "[1,1,3,4,5,6]"]);
    assert_eq!(code, 2);
    // counts never scan
    let (code, v) = json(&["count", "[1,1,3,4,5,6,7,8,9,10]"]);
    assert_eq!(code, 0);
    assert!(v["counts"]["formula"].is_number() || v["counts"]["formula"].is_string());
}

#[test]
fn json_is_deterministic() {
    for args in [
        &["--json", "classify", "[1,1,3]", "--elements"][..],
        &["--json", "verify", "[1,2,3]"],
        &["--json", "idempotents", "[1,1,3,4]"],
    ] {
        let (_, a, _) = run(args);
        let (_, b, _) = run(args);
        assert_eq!(a, b);
    }
}

#[test]
fn json_strings_round_trip() {
    use sandwich_tn::{Partition, PointSet, Transformation};
    let mut checked = 0;
    for args in [
        &["classify", "[2,2,3]", "--elements"][..],
        &["idempotents", "[1,1,3,4]"],
        &["info", "[3,1,1]"],
    ] {
        let (code, v) = json(args);
        assert_eq!(code, 0);
        let mut strings = Vec::new();
        collect_strings(&v, &mut strings);
        for s in strings {
            if s.starts_with('[') {
                let t: Transformation = s.parse().unwrap();
                assert_eq!(t.to_string(), s);
                checked += 1;
            } else if s.starts_with('{') && s.contains('|') {
                let p: Partition = s.parse().unwrap();
                assert_eq!(p.to_string(), s);
                checked += 1;
            } else if s.starts_with('{') {
                let p: PointSet = s.parse().unwrap();
                assert_eq!(p.to_string(), s);
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn classify_lists_for_rank_two() {
    let (code, v) = json(&["classify", "[1,1,3]"]);
    assert_eq!(code, 0);
    assert_eq!(v["isolated"].as_array().unwrap().len(), 23);
    assert_eq!(v["completely_isolated"].as_array().unwrap().len(), 11);
    assert_eq!(v["context"]["l"], 2);
    assert_eq!(v["counts"]["formula"], 16);
}
