use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ehrhart(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ehrhart"));
    cmd.args(args).env_remove("EHRHART_THREADS").stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn json_ok(args: &[&str], stdin: Option<&str>) -> Value {
    let out = ehrhart(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn strip_timing(mut v: Value) -> Value {
    if let Some(o) = v.as_object_mut() {
        o.remove("timing");
    }
    v
}

const SQUARE: &str = r#"{ "ambient_dim": 2, "points": [[0, 0], [1, 0], [0, 1], [1, 1]] }"#;
const REEVE: &str = r#"{ "ambient_dim": 3, "points": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 4]] }"#;

#[test]
fn hstar_of_theorem1() {
    let v = json_ok(&["hstar", "@theorem1", "--method", "both"], None);
    assert_eq!(v["hstar"], serde_json::json!([1, 2, 3, 4, 5, 3, 2, 1]));
    assert_eq!(v["dim"], 7);
    assert_eq!(v["unimodal"], true);
    assert_eq!(v["log_concave"], false);
    assert_eq!(v["log_concavity_violations"], serde_json::json!([5]));
    assert_eq!(v["volume_normalized"], 21);
    assert_eq!(v["ehrhart_coeffs"].as_array().unwrap().len(), 8);
    assert!(v["timing"]["seconds"].is_number());
}

#[test]
fn hstar_of_a_point_and_the_square() {
    let v = json_ok(&["hstar", "-"], Some(r#"{ "ambient_dim": 3, "points": [[4, -2, 7]] }"#));
    assert_eq!(v["hstar"], serde_json::json!([1]));
    assert_eq!(v["dim"], 0);
    let v = json_ok(&["hstar", "-"], Some(SQUARE));
    assert_eq!(v["hstar"], serde_json::json!([1, 1, 0]));
    assert_eq!(v["ehrhart_coeffs"], serde_json::json!(["1", "2", "1"]));
}

#[test]
fn malformed_input_exits_64() {
    for (args, stdin) in [
        (vec!["hstar", "-"], Some("{ not json")),
        (vec!["hstar", "-"], Some(r#"{ "ambient_dim": 2, "points": [[1.5, 0]] }"#)),
        (vec!["hstar", "-"], Some(r#"{ "ambient_dim": 2, "points": [] }"#)),
        (vec!["hstar", "@nothing"], None),
        (vec!["hstar", "/nonexistent/file.json"], None),
        (vec!["arc-polytope", "-"], Some(r#"{ "n": 2, "arcs": [[1, 3]] }"#)),
        (vec!["frobnicate"], None),
        (vec!["points", "@theorem1", "-k", "0"], None),
    ] {
        let out = ehrhart(&args, stdin);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn idp_exit_codes() {
    let v = json_ok(&["idp", "@theorem1"], None);
    assert_eq!(v["holds"], true);
    assert_eq!(v["bound"], 5);
    assert_eq!(v["checked_k"], serde_json::json!([1, 2, 3, 4, 5]));

    let out = ehrhart(&["idp", "-"], Some(REEVE));
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "not_idp");
    assert_eq!(v["witness"]["dilation"], 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));

    let out = ehrhart(&["idp", "@theorem1", "--budget", "10"], None);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "undecided");

    let out = ehrhart(&["idp", "@theorem1", "--paranoid", "2"], None);
    assert_eq!(out.status.code(), Some(64));
    let v = json_ok(&["idp", "@theorem1", "--paranoid", "6"], None);
    assert_eq!(v["checked_k"].as_array().unwrap().len(), 6);
    assert_eq!(v["bound_source"], "paranoid");
}

#[test]
fn threads_do_not_change_output() {
    let a = strip_timing(json_ok(&["--threads", "1", "hstar", "@theorem1"], None));
    let b = strip_timing(json_ok(&["--threads", "3", "hstar", "@theorem1"], None));
    assert_eq!(a, b);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ehrhart"));
    let out = cmd.args(["points", "@theorem1", "-k", "2"]).env("EHRHART_THREADS", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let c: Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = json_ok(&["--threads", "1", "points", "@theorem1", "-k", "2"], None);
    assert_eq!(strip_timing(c), strip_timing(d));
    assert_eq!(ehrhart(&["--threads", "0", "hstar", "@theorem1"], None).status.code(), Some(64));
}

#[test]
fn points_and_counts() {
    let v = json_ok(&["points", "-", "-k", "2"], Some(SQUARE));
    assert_eq!(v["count"], 9);
    assert_eq!(v["points"][0], serde_json::json!([0, 0]));
    assert_eq!(v["points"][8], serde_json::json!([2, 2]));
    // lower-dimensional input keeps its own coordinates
    let v = json_ok(&["points", "-", "-k", "3"], Some(r#"{ "ambient_dim": 2, "points": [[1, 1], [3, 2]] }"#));
    assert_eq!(v["points"], serde_json::json!([[3, 3], [5, 4], [7, 5], [9, 6]]));
    let v = json_ok(&["count", "@theorem2", "-k", "1", "-k", "2", "-k", "3"], None);
    let counts: Vec<i64> = v["counts"].as_array().unwrap().iter().map(|c| c["count"].as_i64().unwrap()).collect();
    assert_eq!(counts, vec![15, 120, 680]);
}

#[test]
fn arc_polytope_pipes_into_hstar() {
    let raw = ehrhart(&["arc-polytope", "@figure1"], None);
    assert_eq!(raw.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&raw.stdout).unwrap();
    assert_eq!(v["ambient_dim"], 14);
    assert_eq!(v["points"].as_array().unwrap().len(), 15);
    let norm = ehrhart(&["arc-polytope", "@figure1", "--normalize"], None);
    let n: Value = serde_json::from_slice(&norm.stdout).unwrap();
    assert_eq!(n["ambient_dim"], 12);
    let small = r#"{ "n": 3, "arcs": [[1, 2], [1, 3]] }"#;
    let seg = ehrhart(&["arc-polytope", "-", "--normalize"], Some(small));
    let h = json_ok(&["hstar", "-"], Some(std::str::from_utf8(&seg.stdout).unwrap()));
    assert_eq!(h["hstar"], serde_json::json!([1, 0]));
}

#[test]
fn equivalence_of_theorem2_and_figure1() {
    let v = json_ok(&["equiv", "@theorem2", "@figure1"], None);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["normalized"], true);
    let m = v["map"]["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 12);
    let v = json_ok(&["equiv", "@theorem1", "@theorem2"], None);
    assert_eq!(v["equivalent"], false);
    assert!(v["map"].is_null());
    assert!(v["reason"].is_string());
}

#[test]
fn triangulations_of_the_square() {
    let v = json_ok(&["triangulations", "-"], Some(SQUARE));
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for t in arr {
        assert_eq!(t["simplices"].as_array().unwrap().len(), 2);
        assert_eq!(t["regular"], true);
        assert_eq!(t["unimodular"], true);
        assert_eq!(t["flag"], true);
    }
    // the doubled square has 9 lattice points, more than d + 3
    let grid = r#"{ "ambient_dim": 2, "points": [[0, 0], [2, 0], [0, 2], [2, 2]] }"#;
    assert_eq!(ehrhart(&["triangulations", "-"], Some(grid)).status.code(), Some(3));
}

#[test]
fn verify_exit_status() {
    let out = ehrhart(&["verify", "theorem1"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 6);
    let v = json_ok(&["verify", "proposition", "--json"], None);
    assert_eq!(v["claims"].as_array().unwrap().len(), 1);
    assert_eq!(v["claims"][0]["status"], "PASS");
    assert!(v["timing"]["total"].is_number());
    assert_eq!(ehrhart(&["verify", "theorem9"], None).status.code(), Some(64));
}

#[test]
fn time_limit_gives_undecided() {
    let out = ehrhart(&["--time-limit", "0.01", "count", "@theorem2", "-k", "9"], None);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "undecided");
}

#[test]
fn search_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let v = json_ok(
        &["search", "--dim", "3", "--seed", "5", "--steps", "25", "--coord-range", "1", "--idp-level", "necessary", "--out", out_dir.to_str().unwrap()],
        None,
    );
    assert_eq!(v["steps"], 25);
    let log = std::fs::read_to_string(out_dir.join("runlog.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 26);
    for line in log.lines() {
        let _: Value = serde_json::from_str(line).unwrap();
    }
    assert!(out_dir.join("candidates.jsonl").exists());
    assert_eq!(ehrhart(&["search", "--seed", "1"], None).status.code(), Some(64));
}
