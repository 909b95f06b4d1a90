use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramsey-lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn pattern_reports_exact_densities() {
    let out = run(&["pattern", "C5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["m2"], "4/3");
    assert_eq!(v["result"]["strictlyBalanced"], true);
    assert_eq!(v["result"]["nearlyBipartite"], true);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["subcommand"], "pattern");
}

#[test]
fn constants_for_triangle() {
    let v = json(&run(&["constants", "--pattern", "K3", "--booster-vertices", "3"]));
    assert_eq!(v["result"]["alphaTilde"], "1/6318");
    assert_eq!(v["result"]["delta"], "1/12");
}

#[test]
fn arrows_and_certificates() {
    let v = json(&run(&["arrows", "--pattern", "K3", "--host", "K6"]));
    assert_eq!(v["result"]["verdict"], "arrows");
    let v = json(&run(&["arrows", "--pattern", "K3", "--host", "K5"]));
    assert_eq!(v["result"]["verdict"], "notArrows");
    assert_eq!(v["result"]["certificate"].as_str().unwrap().len(), 10);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["arrows", "--pattern", "Q7", "--host", "K5"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let out = run(&["--budget-nodes", "1", "arrows", "--pattern", "K3", "--n", "40", "--p", "0.5", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["partial"], true);
    assert_eq!(v["result"]["verdict"], "undecided");
}

#[test]
fn runs_are_reproducible_apart_from_timing() {
    let args = ["sample", "--n", "12", "--p", "0.3", "--seed", "9"];
    let (mut a, mut b) = (json(&run(&args)), json(&run(&args)));
    a["timing"] = Value::Null;
    b["timing"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn config_file_merges_and_rejects_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 10\np = 0.4\nseed = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json(&run(&["sample", "--config", cfg]));
    assert_eq!(v["result"]["n"], 10);
    assert_eq!(v["config"]["global"]["seed"], 2);
    let direct = json(&run(&["sample", "--n", "10", "--p", "0.4", "--seed", "2"]));
    assert_eq!(v["result"], direct["result"]);
    assert_eq!(run(&["sample", "--config", cfg, "--n", "11"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.toml"), "bogus = 1\n").unwrap();
    let bad = dir.path().join("bad.toml");
    assert_eq!(run(&["sample", "--n", "3", "--p", "0.5", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_artifacts_carry_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = run(&[
        "threshold", "--pattern", "K3", "--n", "8", "--c", "0.5,2", "--trials", "10", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], format!("# ramsey-lab {}", env!("CARGO_PKG_VERSION")));
    assert!(lines[1].starts_with("# config {"));
    let body: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "n,c,p,clamped,estimate,low,high,undecided,trials");
    assert_eq!(body.len(), 3);
}

#[test]
fn hypergraph_commands_read_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, r#"{"m": 2, "edges": [[0, 1]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&run(&["hstats", "--hypergraph", p, "--tau", "1/2"]));
    assert_eq!(v["result"]["stats"]["deltaTau"], "2/1");
    let v = json(&run(&["cores", "--hypergraph", p]));
    assert!(v["result"]["family"]["cores"].as_array().is_some());
}
