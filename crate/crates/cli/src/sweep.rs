//! Parameter sweeps comparing the residue criteria with the Hecke computations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use eisrank::arith::{is_prime, primes_up_to};
use eisrank::hecke::{EisensteinLocalReport, HeckeConfig};
use eisrank::invariants::{check_setup, predict, HypothesisReport, ParameterPoint, Prediction};
use eisrank::modsym::DEFAULT_RESOURCE_BOUND;
use eisrank::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::engine::{Engine, StageTimings};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub primes_p: Vec<u64>,
    pub ell_max: u64,
    pub weights_k: Vec<u32>,
    pub resource_bound: u64,
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub strict: bool,
    /// Also compare local ranks at `k` and `k + p - 1`.
    pub weight_stab: bool,
    /// Run the full-space tangent and cuspidal alignment cross-checks.
    pub cross_checks: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            primes_p: vec![5],
            ell_max: 100,
            weights_k: vec![2],
            resource_bound: DEFAULT_RESOURCE_BOUND,
            jobs: 1,
            cache_dir: None,
            report_path: None,
            strict: false,
            weight_stab: false,
            cross_checks: false,
        }
    }
}

impl SweepConfig {
    /// Problems that make the configuration unusable; reported as usage errors.
    pub fn validate(&self) -> Result<(), String> {
        if self.primes_p.is_empty() {
            return Err("no primes p given".into());
        }
        if self.weights_k.is_empty() {
            return Err("no weights k given".into());
        }
        if let Some(p) = self.primes_p.iter().find(|&&p| p <= 3 || !is_prime(p)) {
            return Err(format!("p = {p} must be a prime greater than 3"));
        }
        if let Some(k) = self.weights_k.iter().find(|&&k| k < 2 || k % 2 == 1) {
            return Err(format!("k = {k} must be even and at least 2"));
        }
        if self.jobs == 0 {
            return Err("--jobs must be positive".into());
        }
        Ok(())
    }

    pub fn hecke_config(&self) -> HeckeConfig {
        HeckeConfig {
            resource_bound: self.resource_bound,
            full_space_check: self.cross_checks,
            cuspidal_check: self.cross_checks,
            ..HeckeConfig::default()
        }
    }

    pub fn engine(&self) -> std::io::Result<Engine> {
        let cache = self.cache_dir.as_ref().map(Cache::new).transpose()?;
        Ok(Engine::new(self.hecke_config(), cache))
    }
}

/// Points `(p, ℓ, k)` with `ℓ ≡ 1 mod p` and `ℓ ≤ ell_max`, ordered by `p`, then `ℓ`, then `k`.
pub fn enumerate_points(cfg: &SweepConfig) -> Vec<ParameterPoint> {
    let mut out = vec![];
    for &p in &cfg.primes_p {
        for ell in primes_up_to(cfg.ell_max).into_iter().filter(|l| l % p == 1) {
            for &k in &cfg.weights_k {
                out.push(ParameterPoint::new(p, ell, k).expect("primes and even weights"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    NotApplicable(String),
}

impl CheckOutcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::NotApplicable(_) => "na",
        }
    }
}

pub const CHECKS: [&str; 5] =
    ["thmA_match", "index_match", "principality_match", "k2_corollary_consistency", "weight_stabilization"];

/// Ranks at `k` and at the next weight congruent to it mod `p - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightStabRecord {
    pub k_prime: u32,
    pub rank_k: usize,
    pub rank_k_prime: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub point: ParameterPoint,
    pub hypotheses: HypothesisReport,
    pub invariants: Option<Prediction>,
    pub hecke: Option<EisensteinLocalReport>,
    pub skip_reason: Option<String>,
    pub error: Option<String>,
    pub checks: BTreeMap<String, CheckOutcome>,
    pub weight_stabilization: Option<WeightStabRecord>,
    pub timings: StageTimings,
    pub invariant_seconds: f64,
}

impl VerificationRecord {
    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.get(name)
    }

    pub fn failed(&self) -> bool {
        self.checks.values().any(|c| *c == CheckOutcome::Fail)
    }
}

/// Evaluate one point. Gate failures and resource limits give skipped records;
/// internal errors are recorded in `error`.
pub fn run_point(pt: &ParameterPoint, engine: &Engine, cfg: &SweepConfig) -> VerificationRecord {
    let hypotheses = check_setup(pt);
    let mut rec = VerificationRecord {
        point: *pt,
        hypotheses,
        invariants: None,
        hecke: None,
        skip_reason: None,
        error: None,
        checks: BTreeMap::new(),
        weight_stabilization: None,
        timings: StageTimings::default(),
        invariant_seconds: 0.0,
    };
    let na = |why: &str| CheckOutcome::NotApplicable(why.to_string());
    let skip = |rec: &mut VerificationRecord, why: String| {
        for c in CHECKS {
            rec.checks.insert(c.to_string(), na(&why));
        }
        rec.skip_reason = Some(why);
    };
    if !hypotheses.all_ok {
        skip(&mut rec, format!("hypothesis:{}", hypotheses.failures().join("+")));
        return rec;
    }
    if pt.k as u64 * (pt.ell + 1) > cfg.resource_bound {
        skip(&mut rec, "resource".to_string());
        return rec;
    }
    let t = Instant::now();
    let pred = match predict(pt) {
        Ok(p) => p,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.invariant_seconds = t.elapsed().as_secs_f64();
    let report = match engine.local_report(pt.p, pt.ell, pt.k) {
        Ok((r, times)) => {
            rec.timings = times;
            r
        }
        Err(Error::ResourceBound { .. }) => {
            rec.invariants = Some(pred);
            skip(&mut rec, "resource".to_string());
            return rec;
        }
        Err(e) => {
            rec.invariants = Some(pred);
            rec.error = Some(e.to_string());
            return rec;
        }
    };

    let c = &mut rec.checks;
    c.insert("thmA_match".into(), CheckOutcome::from_bool((report.rank == 1) == !pred.rank_gt_1_predicted));
    c.insert("index_match".into(), CheckOutcome::from_bool(report.index_valuation == pt.predicted_index()));
    c.insert(
        "principality_match".into(),
        CheckOutcome::from_bool((report.min_gens == 1) == pred.eis_principal_predicted),
    );
    c.insert(
        "k2_corollary_consistency".into(),
        if pt.k == 2 {
            CheckOutcome::from_bool(pred.merel_is_pth_power == !pred.c0_cup_a0_nonzero)
        } else {
            na("k>2")
        },
    );
    let ws = if !cfg.weight_stab {
        na("not requested")
    } else if pt.k == 2 {
        na("k=2")
    } else {
        let k2 = pt.k + (pt.p - 1) as u32;
        if k2 as u64 * (pt.ell + 1) > cfg.resource_bound {
            na("resource")
        } else {
            match engine.local_report(pt.p, pt.ell, k2) {
                Ok((r2, _)) => {
                    rec.weight_stabilization =
                        Some(WeightStabRecord { k_prime: k2, rank_k: report.rank, rank_k_prime: r2.rank });
                    CheckOutcome::from_bool(r2.rank == report.rank)
                }
                Err(e) => {
                    rec.error = Some(format!("weight {k2}: {e}"));
                    na("error")
                }
            }
        }
    };
    rec.checks.insert("weight_stabilization".into(), ws);
    rec.invariants = Some(pred);
    rec.hecke = Some(report);
    rec
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub points: usize,
    pub skipped: usize,
    pub errors: usize,
    pub checks: BTreeMap<String, CheckCounts>,
}

impl Summary {
    pub fn of(records: &[VerificationRecord]) -> Self {
        let mut s = Summary { points: records.len(), ..Default::default() };
        for name in CHECKS {
            s.checks.insert(name.to_string(), CheckCounts::default());
        }
        for r in records {
            s.skipped += r.skip_reason.is_some() as usize;
            s.errors += r.error.is_some() as usize;
            for (name, o) in &r.checks {
                let c = s.checks.entry(name.clone()).or_default();
                match o {
                    CheckOutcome::Pass => c.pass += 1,
                    CheckOutcome::Fail => c.fail += 1,
                    CheckOutcome::NotApplicable(_) => c.not_applicable += 1,
                }
            }
        }
        s
    }

    pub fn failures(&self) -> usize {
        self.checks.values().map(|c| c.fail).sum()
    }
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
    pub modsym_builds: usize,
    pub algebra_builds: usize,
    pub cache_warnings: Vec<String>,
}

/// Run every enumerated point, in parallel across points, and write the reports if requested.
pub fn sweep(cfg: &SweepConfig) -> std::io::Result<SweepOutcome> {
    let engine = cfg.engine()?;
    sweep_with(cfg, &engine)
}

pub fn sweep_with(cfg: &SweepConfig, engine: &Engine) -> std::io::Result<SweepOutcome> {
    let points = enumerate_points(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(std::io::Error::other)?;
    let records: Vec<VerificationRecord> =
        pool.install(|| points.par_iter().map(|pt| run_point(pt, engine, cfg)).collect());
    let summary = Summary::of(&records);
    if let Some(path) = &cfg.report_path {
        write_reports(path, cfg, &summary, &records)?;
    }
    Ok(SweepOutcome {
        records,
        summary,
        modsym_builds: engine.modsym_builds(),
        algebra_builds: engine.algebra_builds(),
        cache_warnings: engine.cache.as_ref().map(|c| c.warnings()).unwrap_or_default(),
    })
}

pub const CSV_COLUMNS: [&str; 23] = [
    "p",
    "ell",
    "k",
    "nu",
    "vpk",
    "hyp_ok",
    "merel_val",
    "merel_pth",
    "wake_val",
    "wake_pth",
    "lec_val",
    "lec_pth",
    "pred_rank_gt1",
    "pred_principal",
    "rank",
    "index_val",
    "min_gens",
    "tangent_dim",
    "thmA_match",
    "index_match",
    "principality_match",
    "k2_consistency",
    "skip_reason",
];

fn csv_row(r: &VerificationRecord) -> Vec<String> {
    let pt = &r.point;
    let opt = |x: Option<String>| x.unwrap_or_default();
    let inv = |name: &str| r.invariants.as_ref().and_then(|p| p.invariant_values.get(name).copied());
    let val = |name: &str| opt(inv(name).map(|v| v.value.value.to_string()));
    let pth = |name: &str| opt(inv(name).map(|v| v.is_pth_power.to_string()));
    let pred = r.invariants.as_ref();
    let h = r.hecke.as_ref();
    let check = |name: &str| opt(r.check(name).map(|c| c.label().to_string()));
    let reason = match (&r.skip_reason, &r.error) {
        (Some(s), _) => s.clone(),
        (None, Some(e)) => format!("error:{e}"),
        _ => String::new(),
    };
    vec![
        pt.p.to_string(),
        pt.ell.to_string(),
        pt.k.to_string(),
        pt.nu.to_string(),
        pt.vpk.to_string(),
        r.hypotheses.all_ok.to_string(),
        val("merel"),
        pth("merel"),
        val("wake"),
        pth("wake"),
        val("lecouturier"),
        pth("lecouturier"),
        opt(pred.map(|p| p.rank_gt_1_predicted.to_string())),
        opt(pred.map(|p| p.eis_principal_predicted.to_string())),
        opt(h.map(|h| h.rank.to_string())),
        opt(h.map(|h| h.index_valuation.to_string())),
        opt(h.map(|h| h.min_gens.to_string())),
        opt(h.and_then(|h| h.tangent_dim_t).map(|t| t.to_string())),
        check("thmA_match"),
        check("index_match"),
        check("principality_match"),
        check("k2_corollary_consistency"),
        reason,
    ]
}

/// The CSV report as a string; deterministic for a given set of records.
pub fn csv_report(records: &[VerificationRecord]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in records {
        w.write_record(csv_row(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config: &'a SweepConfig,
    summary: &'a Summary,
    records: &'a [VerificationRecord],
}

/// Write `<path>.csv` and `<path>.json`.
pub fn write_reports(path: &Path, cfg: &SweepConfig, summary: &Summary, records: &[VerificationRecord]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path.with_extension("csv"), csv_report(records))?;
    let json = serde_json::to_string_pretty(&JsonReport { config: cfg, summary, records })?;
    std::fs::write(path.with_extension("json"), json)?;
    Ok(())
}
