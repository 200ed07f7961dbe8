use std::process::{Command, Output};

use serde_json::Value;

fn gll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gll"))
        .args(args)
        .env_remove("GLL_VERTEX_BUDGET")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn analyze_harmonic_symbol() {
    let out = gll(&["analyze", "--graph", "ray", "--symbol", "1/(d+1)", "--radius", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let a = &json_lines(&out)[0];
    assert_eq!(num(&a["op_norm"][0]["value"]), 1.5);
    assert_eq!(num(&a["op_norm"][1]["value"]), 1.5);
    assert_eq!(a["compact"]["status"], "Proven");
    assert_eq!(a["spectrum"]["extras"], serde_json::json!([[0.0, 0.0]]));
    for key in ["symbol", "family", "radius", "sup_norm", "lip_norm", "sigma", "A", "B", "bounded", "isometry", "ess_norm"] {
        assert!(a.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn analyze_zero_and_basel() {
    let out = gll(&["analyze", "--graph", "tree:3", "--symbol", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let a = &json_lines(&out)[0];
    assert_eq!(a["compact"]["status"], "Proven");
    assert_eq!(num(&a["op_norm"][1]["value"]), 0.0);

    let out = gll(&["analyze", "--graph", "ray", "--symbol", "sum(1/k^2,k,1,d+1)", "--radius", "128"]);
    let a = &json_lines(&out)[0];
    assert_eq!(a["compact"]["status"], "Refuted");
    assert!((num(&a["A"]["value"]) - 1.6449340668).abs() < 1e-9);
}

#[test]
fn unbounded_symbol_exits_two() {
    let out = gll(&["analyze", "--symbol", "witness:distance", "--radius", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let a = &json_lines(&out)[0];
    assert_eq!(a["bounded"]["status"], "Refuted");
    assert_eq!(a["sup_norm"]["value"], "inf");
}

#[test]
fn norm_and_approx() {
    let out = gll(&["norm", "--graph", "ray", "--function", "witness:distance", "--radius", "10"]);
    let e = &json_lines(&out)[0];
    assert_eq!((num(&e["value"]), e["kind"].as_str()), (1.0, Some("Exact")));

    let out = gll(&["approx", "--graph", "ray", "--function", "witness:harmonic", "--eps", "0.5"]);
    let a = &json_lines(&out)[0];
    assert!(num(&a["achieved"]["value"]) < 0.5);
    assert_eq!(a["guaranteed"], true);
}

#[test]
fn schedule_emits_one_record_per_radius() {
    let out = gll(&["norm", "--function", "sqrt(d)", "--radius", "16,32,64"]);
    let recs = json_lines(&out);
    let radii: Vec<u64> = recs.iter().map(|r| r["radius"].as_u64().unwrap()).collect();
    assert_eq!(radii, vec![16, 32, 64]);
    assert!(recs.iter().all(|r| r["kind"] == "LowerBound"));
}

#[test]
fn verify_is_clean_and_deterministic() {
    let args = ["verify", "--graph", "ladder", "--seed", "7", "--radius", "20"];
    let a = gll(&args);
    let b = gll(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let recs = json_lines(&a);
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r["status"] != "fail"));
}

#[test]
fn csv_outputs() {
    let out = gll(&["norm", "--function", "witness:tent:3", "--radius", "8", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("shell,n,value\n"));
    assert!(text.contains("abs_max,3,3\n"));
    let out = gll(&["spectrum", "--symbol", "1/(d+1)", "--radius", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,site,re,im\n") && text.contains("extra,,0,0"));
}

#[test]
fn config_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = gll(&["config", "spectrum", "--symbol", "1/(d+1)", "--radius", "8", "--lambda", "2"]);
    assert_eq!(cfg.status.code(), Some(0));
    let path = dir.path().join("run.json");
    std::fs::write(&path, &cfg.stdout).unwrap();
    let replay = gll(&["run", path.to_str().unwrap()]);
    let direct = gll(&["spectrum", "--symbol", "1/(d+1)", "--radius", "8", "--lambda", "2"]);
    assert_eq!(replay.stdout, direct.stdout);
    assert!(!direct.stdout.is_empty());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.json");
    let out = gll(&["norm", "--function", "1", "--radius", "3", "--out", path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"kind\":\"Exact\""));
}

#[test]
fn errors_exit_one() {
    assert_eq!(gll(&["analyze", "--graph", "torus", "--symbol", "1"]).status.code(), Some(1));
    assert_eq!(gll(&["analyze", "--symbol", "1/(d+"]).status.code(), Some(1));
    assert_eq!(gll(&["analyze"]).status.code(), Some(1));
    assert_eq!(gll(&["norm", "--bogus"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_gll"))
        .args(["norm", "--graph", "tree:3", "--function", "x", "--radius", "20"])
        .env("GLL_VERTEX_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("largest feasible radius is 8"));
}
