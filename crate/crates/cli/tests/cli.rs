use std::process::{Command, Output};

use serde_json::Value;

fn frog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frog"))
        .args(args)
        .env_remove("FROG_OUTPUT_DIR")
        .env_remove("FROG_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn exit_codes() {
    assert_eq!(frog(&["certify", "--model", "phi6", "--power", "66"]).status.code(), Some(0));
    assert_eq!(frog(&["certify", "--model", "phi6", "--power", "65"]).status.code(), Some(1));
    assert_eq!(frog(&["certify", "--model", "phi9", "--power", "65"]).status.code(), Some(2));
    assert_eq!(frog(&["mu", "--d", "5", "--unknown"]).status.code(), Some(2));
    assert_eq!(frog(&["recurrence", "--n", "3", "--x", "half"]).status.code(), Some(2));
    assert_eq!(frog(&["recurrence", "--n", "3", "--x", "3/2"]).status.code(), Some(2));
    assert_eq!(frog(&["mu", "--d", "1"]).status.code(), Some(2));
    assert_eq!(frog(&["rde", "--depth", "13"]).status.code(), Some(3));
    assert_eq!(frog(&["certify", "--model", "phi6", "--power", "66", "--bit-limit", "64"]).status.code(), Some(3));
    assert_eq!(frog(&["delta", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn usage_errors_name_the_flag() {
    let out = frog(&["recurrence", "--n", "3", "--x", "half"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--x"));
    let out = frog(&["census", "--graph", "ring", "--horizon", "1", "--reps", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--graph"));
}

#[test]
fn documented_examples() {
    let v = json(&frog(&["certify", "--model", "phi6", "--power", "66"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["matrix"], "phi6");
    assert_eq!(v["y"], "1/3");
    assert_eq!(v["power"], 66);
    assert_eq!(v["schema_version"], 1);

    let v = json(&frog(&["mu", "--d", "5"]));
    assert!((v["mu"].as_f64().unwrap() - 1.054093).abs() < 1e-6);
    assert_eq!(v["transient"], false);

    let v = json(&frog(&["delta", "--n", "1"]));
    assert_eq!(v["delta"], "1/8");

    let v = json(&frog(&["recurrence", "--n", "2", "--x", "0", "--exact"]));
    assert_eq!(v["value"], "1/2");
    let v = json(&frog(&["recurrence", "--n", "1", "--x", "1/2"]));
    assert!((v["value"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-15);
}

#[test]
fn header_goes_to_stderr() {
    let out = frog(&["fence", "--d", "2", "--kmax", "2", "--reps", "5", "--seed", "9"]);
    let err = String::from_utf8_lossy(&out.stderr);
    let header = err.lines().next().unwrap();
    assert!(header.starts_with("# frog "), "{header}");
    assert!(header.contains("seed=9") && header.contains("config="));
}

#[test]
fn csv_round_trips() {
    let out = frog(&["fence", "--d", "3", "--kmax", "4", "--reps", "20", "--seed", "2"]);
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["d", "k", "reps", "mean_A", "stderr_A", "scaled", "mean_root_visits", "aborted"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[1].parse::<u32>().unwrap(), i as u32 + 1);
        assert!(row[5].parse::<f64>().unwrap() > 0.0);
    }
    let out = frog(&["rde", "--depth", "3", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let total: num_rational::BigRational = r
        .records()
        .map(|x| frog_core::rational::parse_ratio(&x.unwrap()[1]).unwrap())
        .sum();
    assert_eq!(total, frog_core::rational::ratio(1, 1));
}

#[test]
fn json_payloads_reparse() {
    for args in [
        vec!["rde", "--depth", "4"],
        vec!["rde", "--depth", "4", "--sample", "200", "--seed", "1"],
        vec!["census", "--graph", "tree:3", "--horizon", "50", "--reps", "20", "--depth-cap", "5"],
        vec!["fence", "--d", "2", "--kmax", "3", "--reps", "10", "--format", "json"],
        vec!["delta", "--n", "10"],
    ] {
        let v = json(&frog(&args));
        assert_eq!(v["schema_version"], 1, "{args:?}");
        assert_eq!(v["command"], args[0]);
        assert!(v["run"]["config_hash"].as_str().unwrap().len() == 16);
    }
    let v = json(&frog(&["rde", "--depth", "4"]));
    let pmf: Vec<_> = v["pmf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| frog_core::rational::parse_ratio(p.as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(pmf.len(), 9);
}

#[test]
fn identical_flags_give_identical_payloads() {
    let args = ["fence", "--d", "2", "--kmax", "5", "--reps", "50", "--seed", "4"];
    assert_eq!(frog(&args).stdout, frog(&args).stdout);
    let args = ["census", "--graph", "zglue", "--horizon", "20", "--reps", "50", "--seed", "4"];
    assert_eq!(frog(&args).stdout, frog(&args).stdout);
    let a = frog(&["fence", "--d", "2", "--kmax", "5", "--reps", "50", "--seed", "4", "--parallel", "1"]);
    let b = frog(&["fence", "--d", "2", "--kmax", "5", "--reps", "50", "--seed", "4", "--parallel", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = frog(&["fence", "--d", "2", "--kmax", "5", "--reps", "50", "--seed", "5"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn environment_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_frog"))
        .args(["fence", "--d", "2", "--kmax", "3", "--reps", "10"])
        .env("FROG_SEED", "4")
        .env("FROG_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(dir.path().join("fence.csv")).unwrap();
    assert_eq!(written, frog(&["fence", "--d", "2", "--kmax", "3", "--reps", "10", "--seed", "4"]).stdout);

    let file = dir.path().join("cert.json");
    let out = frog(&["certify", "--model", "phi6", "--power", "66", "--out", file.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(file).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn matrix_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi6.txt");
    let out = frog(&["certify", "--model", "phi6", "--power", "66", "--dump-matrix", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.contains("D5\tD6\t1/36*y^-1 + 55/36*y^1"));
}
