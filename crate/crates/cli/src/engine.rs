//! Per-point Hecke computations with optional caching.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use eisrank::hecke::{
    analyze, build_hecke_algebra, cuspidal_alignment, full_space_tangent, EisensteinLocalReport, HeckeAlgebraData,
    HeckeAlgebraDump, HeckeConfig, PlusOperators,
};
use eisrank::linalg::MatrixDump;
use eisrank::modsym::{ManinSymbolSpace, OperatorName};
use eisrank::{PadicTruncation, Result};
use serde::{Deserialize, Serialize};

use crate::cache::{keys, Cache};

/// Metadata stored next to the cached plus-space operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSummary {
    pub p: u64,
    pub level: u64,
    pub weight: u32,
    pub digits: u32,
    pub dim: usize,
    pub cuspidal_dim: usize,
    pub plus_dim: usize,
    pub precision_loss: u32,
    pub generators: Vec<OperatorName>,
}

/// Seconds spent in each stage of a point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub modsym: f64,
    pub algebra: f64,
    pub analysis: f64,
    pub cross_checks: f64,
}

/// Shared state for computing many points.
#[derive(Debug)]
pub struct Engine {
    pub config: HeckeConfig,
    pub cache: Option<Cache>,
    modsym_builds: AtomicUsize,
    algebra_builds: AtomicUsize,
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

impl Engine {
    pub fn new(config: HeckeConfig, cache: Option<Cache>) -> Self {
        Self { config, cache, modsym_builds: AtomicUsize::new(0), algebra_builds: AtomicUsize::new(0) }
    }

    /// Spaces of modular symbols built so far (cache hits excluded).
    pub fn modsym_builds(&self) -> usize {
        self.modsym_builds.load(Ordering::Relaxed)
    }

    pub fn algebra_builds(&self) -> usize {
        self.algebra_builds.load(Ordering::Relaxed)
    }

    fn put<T: Serialize>(&self, key: &str, v: &T) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.put(key, v) {
                log::warn!("could not write cache entry {key}: {e}");
            }
        }
    }

    fn get<T: serde::de::DeserializeOwned>(&self, key: &str) -> Option<T> {
        self.cache.as_ref().and_then(|c| c.get(key))
    }

    fn build_space(&self, p: u64, ell: u64, k: u32) -> Result<ManinSymbolSpace<PadicTruncation>> {
        self.modsym_builds.fetch_add(1, Ordering::Relaxed);
        let ring = PadicTruncation::new(p, PadicTruncation::max_precision(p))?;
        ManinSymbolSpace::build(ring, ell, k, self.config.resource_bound)
    }

    fn cached_operators(&self, p: u64, ell: u64, k: u32) -> Option<PlusOperators> {
        let meta: SpaceSummary = self.get(&keys::modsym_space(p, ell, k))?;
        let dumps = meta
            .generators
            .iter()
            .map(|g| Some((g.clone(), self.get::<MatrixDump>(&keys::modsym_operator(p, ell, k, &g.to_string()))?)))
            .collect::<Option<Vec<_>>>()?;
        PlusOperators::from_dumps(p, ell, k, meta.digits, &dumps).ok()
    }

    fn store_operators(&self, space: &ManinSymbolSpace<PadicTruncation>, ops: &PlusOperators) {
        if self.cache.is_none() {
            return;
        }
        let (p, ell, k) = (ops.p, ops.level, ops.weight);
        for (g, d) in ops.dumps() {
            self.put(&keys::modsym_operator(p, ell, k, &g.to_string()), &d);
        }
        let meta = SpaceSummary {
            p,
            level: ell,
            weight: k,
            digits: ops.ring.precision(),
            dim: space.dim(),
            cuspidal_dim: space.cuspidal_dim(),
            plus_dim: space.plus_dim(),
            precision_loss: space.precision_loss(),
            generators: ops.generators(),
        };
        // Written last so that a present summary implies complete operator files.
        self.put(&keys::modsym_space(p, ell, k), &meta);
    }

    /// Plus-space generators, from the cache or freshly computed.
    pub fn plus_operators(&self, p: u64, ell: u64, k: u32) -> Result<PlusOperators> {
        if let Some(ops) = self.cached_operators(p, ell, k) {
            return Ok(ops);
        }
        let space = self.build_space(p, ell, k)?;
        let ops = PlusOperators::from_space(&space)?;
        self.store_operators(&space, &ops);
        Ok(ops)
    }

    /// The Hecke algebra's regular representation, from the cache or freshly computed.
    pub fn algebra(&self, ops: &PlusOperators) -> Result<HeckeAlgebraData> {
        let key = keys::hecke_algebra(ops.p, ops.level, ops.weight);
        if let Some(alg) = self.get::<HeckeAlgebraDump>(&key).and_then(|d| HeckeAlgebraData::from_dump(&d).ok()) {
            return Ok(alg);
        }
        self.algebra_builds.fetch_add(1, Ordering::Relaxed);
        let alg = build_hecke_algebra(ops, &self.config)?;
        self.put(&key, &alg.to_dump());
        Ok(alg)
    }

    fn report_is_complete(&self, r: &EisensteinLocalReport) -> bool {
        r.index_valuation == 0
            || ((!self.config.full_space_check || r.full_space_tangent.is_some())
                && (!self.config.cuspidal_check || r.cuspidal_aligned.is_some()))
    }

    /// Rank, index, generator count and tangent dimension at `(p, ℓ, k)`.
    pub fn local_report(&self, p: u64, ell: u64, k: u32) -> Result<(EisensteinLocalReport, StageTimings)> {
        let key = keys::hecke_report(p, ell, k);
        let mut times = StageTimings::default();
        if let Some(r) = self.get::<EisensteinLocalReport>(&key) {
            if self.report_is_complete(&r) {
                return Ok((r, times));
            }
        }
        let t = Instant::now();
        let ops = self.plus_operators(p, ell, k)?;
        times.modsym = secs(t);
        let t = Instant::now();
        let alg = self.algebra(&ops)?;
        times.algebra = secs(t);
        let t = Instant::now();
        let mut report = analyze(&alg, &ops, &self.config)?;
        times.analysis = secs(t);
        if report.index_valuation > 0 && (self.config.full_space_check || self.config.cuspidal_check) {
            let t = Instant::now();
            let space = self.build_space(p, ell, k)?;
            if self.config.full_space_check {
                report.full_space_tangent = Some(full_space_tangent(&space, &self.config)?);
            }
            if self.config.cuspidal_check {
                report.cuspidal_aligned = Some(cuspidal_alignment(&space, &ops, &self.config)?);
            }
            times.cross_checks = secs(t);
        }
        self.put(&key, &report);
        Ok((report, times))
    }
}
