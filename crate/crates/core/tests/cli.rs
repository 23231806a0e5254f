use std::process::{Command, Output};

use bordered_moduli::strata::StratumGraph;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bordered-moduli"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn strata_report_and_round_trip() {
    let o = run(&["strata", "--g", "0", "--h", "3", "--n", "0", "--m", "0,0,0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 9, 21, 14]));
    assert_eq!(v["dim_values"], serde_json::json!([3, 2, 1, 0]));

    let o = run(&["strata", "--g", "0", "--h", "2", "--m", "2,0", "--show", "graphs", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let strata = v["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 11);
    for s in strata {
        let decoded = StratumGraph::from_json(&s.to_string()).unwrap();
        assert_eq!(serde_json::to_value(&decoded).unwrap(), *s);
    }

    let dot = stdout(&run(&["strata", "--g", "0", "--h", "2", "--m", "1,0", "--show", "dot"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 2);
}

#[test]
fn documented_examples() {
    let o = run(&["invariant", "--g", "0", "--h", "1", "--d", "3", "--n", "3", "--a", "1"]);
    assert_eq!(stdout(&o), "1/9\n");
    let o = run(&["vdim", "--mu", "0", "--N", "3", "--g", "2", "--h", "2", "--n", "0", "--m", "0,0"]);
    assert!(stdout(&o).contains("virtual_dim: 0\n"));
    let o = run(&["pants", "--check-k5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["outcome"], "isomorphic");
    let o = run(&["classify", "--gtilde", "4", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 8);
    let o = run(&["index", "--mu", "-4", "--N", "2", "--g", "1", "--h", "1"]);
    assert_eq!(stdout(&o), "fredholm_index: -6\n");
    let o = run(&["pants", "--disc", "5"]);
    assert!(stdout(&o).contains("components: 24"));
}

#[test]
fn exit_codes() {
    let o = run(&["index", "--mu", "3", "--N", "2", "--g", "0", "--h", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`mu`"));
    let o = run(&["strata", "--g", "0", "--h", "1", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["invariant", "--g", "0", "--h", "2", "--d", "3", "--n", "1,1", "--a", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`n`"));
    let o = run(&["strata", "--g", "0", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["classify", "--gtilde", "1"]).env("MODULI_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["strata", "--g", "0", "--h", "3", "--m", "0,0,0", "--show", "poset", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let gluing = [
        "verify-gluing",
        "--r-list",
        "1e-2,1e-3",
        "--p",
        "2",
        "--resolution",
        "256",
        "--beta-resolution",
        "128",
        "--format",
        "json",
    ];
    let one = bin().args(gluing).env("MODULI_THREADS", "1").output().unwrap();
    let three = bin().args(gluing).env("MODULI_THREADS", "3").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("bm_cli_{}.csv", std::process::id()));
    let o = run(&["invariant", "--g", "1", "--h", "1", "--d", "2", "--n", "2", "--table", "-1..2", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("g,h,d,n,a,value"));
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("1,1,2,2,1,1/24"));
    let _ = std::fs::remove_file(path);
}
