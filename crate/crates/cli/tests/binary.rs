//! The `eisrank` executable: output and exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn eisrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisrank"))
        .args(args)
        .env_remove("EISRANK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn rank_reports_the_smallest_example() {
    let o = eisrank(&["rank", "--p", "5", "--ell", "11", "--k", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["rank"].as_u64(), v["index_valuation"].as_u64(), v["min_gens"].as_u64()), (Some(1), Some(1), Some(1)));
}

#[test]
fn invariants_text_and_json() {
    let o = eisrank(&["invariants", "--p", "5", "--ell", "11", "--k", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["merel"]["value"]["value"], 5);
    assert_eq!(v["merel"]["is_pth_power"], false);
    assert_eq!(v["prediction"]["rank_gt_1_predicted"], false);
    let o = eisrank(&["invariants", "--p", "5", "--ell", "13", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn modsym_prints_and_dumps() {
    let o = eisrank(&["modsym", "--ell", "11", "--k", "2", "--op", "T2", "--subspace", "plus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-2");
    let o = eisrank(&["modsym", "--ell", "11", "--k", "4", "--op", "dims"]);
    assert!(stdout(&o).contains("cusp forms: 2"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let o = eisrank(&["modsym", "--ell", "11", "--k", "2", "--op", "w", "--p", "5", "--dump", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((v["rows"].as_u64(), v["cols"].as_u64()), (Some(3), Some(3)));
    let o = eisrank(&["modsym", "--ell", "11", "--k", "2", "--op", "T11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let base = ["verify", "--p", "5", "--ell-max", "45", "--cache", cache.to_str().unwrap()];

    let o = eisrank(&[&base[..], &["--k", "2", "--strict"]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rd.records().count(), 3);
    assert!(cache.join("hecke/5_31_2/report.json").exists());

    assert_eq!(eisrank(&[&base[..], &["--k"]].concat()).status.code(), Some(2));
    assert_eq!(eisrank(&["verify", "--p", "3", "--ell-max", "40", "--k", "2"]).status.code(), Some(2));
    assert_eq!(eisrank(&["verify", "--ell-max", "40", "--k", "2"]).status.code(), Some(2));
    assert_eq!(eisrank(&["frobnicate"]).status.code(), Some(2));

    // A report path below a regular file cannot be created.
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let report = blocker.join("r");
    let o = eisrank(&[&base[..], &["--k", "2", "--report", report.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(3));
}
