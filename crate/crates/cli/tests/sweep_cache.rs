//! Sweep records, reports and the on-disk cache.

use std::fs;

use eisrank::hecke::HeckeConfig;
use eisrank::invariants::ParameterPoint;
use eisrank_cli::cache::keys;
use eisrank_cli::sweep::{csv_report, CheckOutcome, CSV_COLUMNS};
use eisrank_cli::{enumerate_points, run_point, sweep, Cache, Engine, SweepConfig};
use serde_json::{json, Value};

fn small(cache: Option<&std::path::Path>) -> SweepConfig {
    SweepConfig { primes_p: vec![5], ell_max: 100, weights_k: vec![2], cache_dir: cache.map(Into::into), ..Default::default() }
}

#[test]
fn enumerates_primes_congruent_to_one() {
    let ells: Vec<u64> = enumerate_points(&small(None)).iter().map(|p| p.ell).collect();
    assert_eq!(ells, vec![11, 31, 41, 61, 71]);
}

#[test]
fn config_validation() {
    assert!(small(None).validate().is_ok());
    assert!(SweepConfig { weights_k: vec![], ..small(None) }.validate().is_err());
    assert!(SweepConfig { primes_p: vec![3], ..small(None) }.validate().is_err());
    assert!(SweepConfig { weights_k: vec![3], ..small(None) }.validate().is_err());
    assert!(SweepConfig { jobs: 0, ..small(None) }.validate().is_err());
}

#[test]
fn warm_cache_skips_all_builds_and_tampering_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(Some(dir.path()));
    let cold = sweep(&cfg).unwrap();
    assert_eq!(cold.records.len(), 5);
    assert_eq!(cold.summary.failures(), 0);
    assert_eq!(cold.summary.errors, 0);
    assert_eq!(cold.modsym_builds, 5);

    let warm = sweep(&cfg).unwrap();
    assert_eq!((warm.modsym_builds, warm.algebra_builds), (0, 0));
    assert!(warm.cache_warnings.is_empty());
    assert_eq!(csv_report(&warm.records), csv_report(&cold.records));

    // Alter a stored report without fixing its digest.
    let path = dir.path().join(keys::hecke_report(5, 31, 2));
    let mut env: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    env["payload"]["rank"] = json!(7);
    fs::write(&path, env.to_string()).unwrap();
    let again = sweep(&cfg).unwrap();
    assert_eq!(again.cache_warnings.len(), 1, "{:?}", again.cache_warnings);
    assert!(again.cache_warnings[0].contains("digest"));
    assert_eq!(again.modsym_builds, 0);
    assert_eq!(csv_report(&again.records), csv_report(&cold.records));
    // The recomputed entry replaced the tampered one.
    assert!(sweep(&cfg).unwrap().cache_warnings.is_empty());
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = Cache::new(dir.path()).unwrap();
    let v = json!({"big": "123456789012345678901234567890", "xs": [1, 2, 3]});
    c.put("a/b.json", &v).unwrap();
    c.put("a/b.json", &v).unwrap();
    assert_eq!(c.get::<Value>("a/b.json"), Some(v));
    assert_eq!(c.get::<Value>("a/missing.json"), None);
    assert_eq!((c.hits(), c.misses()), (1, 1));
    let files: Vec<_> = fs::read_dir(dir.path().join("a")).unwrap().collect();
    assert_eq!(files.len(), 1);
    fs::write(dir.path().join("a/b.json"), "not json").unwrap();
    assert_eq!(c.get::<Value>("a/b.json"), None);
    assert_eq!(c.warnings().len(), 1);
}

#[test]
fn csv_is_deterministic_and_has_one_row_per_point() {
    let cfg = SweepConfig { primes_p: vec![5, 7], ell_max: 45, weights_k: vec![2, 4, 6], ..Default::default() };
    let a = sweep(&cfg).unwrap();
    let b = sweep(&cfg).unwrap();
    let (ca, cb) = (csv_report(&a.records), csv_report(&b.records));
    assert_eq!(ca, cb);
    let mut rd = csv::Reader::from_reader(ca.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS.to_vec());
    assert_eq!(rd.records().count(), enumerate_points(&cfg).len());
}

#[test]
fn reports_are_written_next_to_each_other() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("out/run");
    let cfg = SweepConfig { report_path: Some(base.clone()), ell_max: 40, ..small(None) };
    let out = sweep(&cfg).unwrap();
    let csv_text = fs::read_to_string(base.with_extension("csv")).unwrap();
    assert_eq!(csv_text, csv_report(&out.records));
    let json: Value = serde_json::from_str(&fs::read_to_string(base.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json["records"].as_array().unwrap().len(), 2);
    assert_eq!(json["summary"]["points"], 2);
}

#[test]
fn gated_points_are_skipped_not_failed() {
    let cfg = small(None);
    let engine = Engine::new(HeckeConfig::default(), None);
    let rec = run_point(&ParameterPoint::new(5, 11, 4).unwrap(), &engine, &cfg);
    assert_eq!(rec.skip_reason.as_deref(), Some("hypothesis:p_minus_1_div_k"));
    assert!(rec.hecke.is_none() && rec.error.is_none());
    assert!(rec.checks.values().all(|c| matches!(c, CheckOutcome::NotApplicable(_))));
    assert_eq!(engine.modsym_builds(), 0);

    let tight = SweepConfig { resource_bound: 100, ..cfg };
    let rec = run_point(&ParameterPoint::new(5, 101, 2).unwrap(), &engine, &tight);
    assert_eq!(rec.skip_reason.as_deref(), Some("resource"));
}

#[test]
fn full_pipeline_at_level_twenty_nine() {
    let cfg = SweepConfig { weight_stab: true, cross_checks: true, ..small(None) };
    let engine = cfg.engine().unwrap();
    let rec = run_point(&ParameterPoint::new(7, 29, 2).unwrap(), &engine, &cfg);
    assert!(rec.error.is_none() && rec.skip_reason.is_none());
    let h = rec.hecke.as_ref().unwrap();
    assert_eq!(h.algebra_dim, 2);
    for c in ["thmA_match", "index_match", "principality_match", "k2_corollary_consistency"] {
        assert_eq!(rec.check(c), Some(&CheckOutcome::Pass), "{c}");
    }
    assert!(matches!(rec.check("weight_stabilization"), Some(CheckOutcome::NotApplicable(_))));

    let rec = run_point(&ParameterPoint::new(7, 29, 4).unwrap(), &engine, &cfg);
    assert_eq!(rec.check("weight_stabilization"), Some(&CheckOutcome::Pass));
    assert_eq!(rec.weight_stabilization.as_ref().unwrap().k_prime, 10);
    assert!(!rec.failed());
}
