use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn puremin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puremin")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn emit(dir: &Path, name: &str) -> String {
    let p = dir.join(format!("{}.json", name.replace(':', "_")));
    let o = puremin(&["example", name, "--emit", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p.to_str().unwrap().to_owned()
}

#[test]
fn dold_diagnosis() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "dold");
    let o = puremin(&["diagnose", &f]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for line in ["acyclic=true", "pure_acyclic=false", "contractible=false", "split_minimal=true", "pure_minimal=true", "minimal=yes"] {
        assert!(text.lines().any(|l| l == line), "{line} missing from\n{text}");
    }
    assert!(text.contains("notes:"));
    let v = json(&puremin(&["--json", "diagnose", &f]));
    assert_eq!(v["pure_acyclic"], false);
    assert_eq!(v["minimal"], "yes");
}

#[test]
fn exa_f_has_the_identity_as_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "exaF");
    let v = json(&puremin(&["diagnose", "--json", &f]));
    assert_eq!(v["split_minimal"], true);
    assert_eq!(v["minimal"], "no");
    let w = v["minimal_witness"].as_object().unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w["0"]["rows"], 1);
}

#[test]
fn disk_reduces_to_zero_with_one_move() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "disk");
    let trace = dir.path().join("trace.json");
    let reduced = dir.path().join("reduced.json");
    let o = puremin(&["reduce", &f, "--trace", trace.to_str().unwrap(), "--out", reduced.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1 moves"));
    assert!(stdout(&o).contains("reduced complex is zero"));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["moves"].as_array().unwrap().len(), 1);
    assert_eq!(code(&puremin(&["reduce", "--replay", trace.to_str().unwrap()])), 0);
    assert_eq!(code(&puremin(&["validate", reduced.to_str().unwrap()])), 0);
    let v = json(&puremin(&["reduce", "--json", &f]));
    assert_eq!(v["moves"], 1);
}

#[test]
fn z2_over_z4_has_infinite_projective_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("z2_over_z4.json");
    std::fs::write(&f, r#"{"ring": "Z/4", "module": {"generators": 1, "relations": {"rows": 1, "cols": 1, "entries": [[2]]}}}"#).unwrap();
    let o = puremin(&["dimension", f.to_str().unwrap(), "--kind", "pd", "--cutoff", "8"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("pd = infinite"), "{}", stdout(&o));
    let v = json(&puremin(&["--json", "dimension", f.to_str().unwrap(), "--kind", "fd"]));
    assert_eq!(v["value"], "infinite");
}

#[test]
fn emitted_examples_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["dold", "exaF", "exaF:7", "koszul22", "disk", "sphere"] {
        let f = emit(dir.path(), name);
        assert_eq!(code(&puremin(&["validate", &f])), 0, "{name}");
        let first = json(&puremin(&["--json", "diagnose", &f]));
        // re-emit through the reducer's output and compare diagnoses
        let again = dir.path().join("again.json");
        let o = puremin(&["reduce", &f, "--out", again.to_str().unwrap()]);
        if code(&o) == 0 && first["split_minimal"] == true {
            let second = json(&puremin(&["--json", "diagnose", again.to_str().unwrap()]));
            assert_eq!(first["acyclic"], second["acyclic"], "{name}");
            assert_eq!(first["split_minimal"], second["split_minimal"], "{name}");
        }
        let a = stdout(&puremin(&["--json", "homology", &f]));
        let b = stdout(&puremin(&["--json", "homology", &f]));
        assert_eq!(a, b, "{name}: unstable output");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&puremin(&["example", "ZQ"])), 1);
    assert_eq!(code(&puremin(&["example", "Zp_completion"])), 1);
    assert_eq!(code(&puremin(&["example", "nope"])), 3);
    assert_eq!(code(&puremin(&["harness", "--suite", "nope"])), 3);
    assert_eq!(code(&puremin(&["validate", "/nonexistent.json"])), 2);
    assert_eq!(code(&puremin(&["dimension", "x.json", "--kind", "gd"])), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"ring": "Z", "shape": {"kind": "bounded", "min": 0, "max": 0}, "modules": {"0": {"free_rank": 1}}, "differentials": {}, "colour": 1}"#).unwrap();
    let o = puremin(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    // d∘d ≠ 0
    let f = emit(dir.path(), "koszul22");
    let text = std::fs::read_to_string(&f).unwrap().replace("-2", "3");
    std::fs::write(&f, text).unwrap();
    assert_eq!(code(&puremin(&["validate", &f])), 2);

    // periodic input has no resolution here
    let f = emit(dir.path(), "dold");
    assert_eq!(code(&puremin(&["dimension", &f])), 3);
}

#[test]
fn harness_runs_and_writes_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let cx = dir.path().join("cx");
    let o = puremin(&["--json", "harness", "--suite", "vnr", "--seed", "3", "--ring", "Z/4", "--counterexamples", cx.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(!v["expected_counterexamples"].as_array().unwrap().is_empty());
    let files: Vec<_> = std::fs::read_dir(&cx).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    let d = json(&puremin(&["--json", "diagnose", files[0].to_str().unwrap()]));
    assert_eq!(d["acyclic"], true);
    assert_eq!(d["pure_acyclic"], false);

    let o = puremin(&["harness", "--suite", "bg", "--seed", "1", "--cases", "80"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS bg"));
    assert_eq!(code(&puremin(&["harness", "--suite", "all", "--ring", "Z/4"])), 2);
    // too few cases to reach the non-vacuous minimum
    assert_eq!(code(&puremin(&["harness", "--suite", "bg", "--cases", "5"])), 1);
}
