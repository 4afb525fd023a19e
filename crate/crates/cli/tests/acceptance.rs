//! End-to-end acceptance run: one line per criterion, then a single verdict.
//!
//! The sweep covers p ∈ {5, 7, 13}, ℓ ≡ 1 mod p up to 200 and k ∈ {2, 4, 6, 8, 10}
//! with k(ℓ + 1) ≤ 6000. All comparisons are exact.

use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

use eisrank::arith::{is_pth_power, primes_up_to, ResidueClass};
use eisrank::hecke::{weight_stabilization_check, HeckeConfig};
use eisrank::invariants::{merel_invariant, wake_unit, wake_unit_with_root, ParameterPoint};
use eisrank::linalg::{hnf, snf};
use eisrank::modsym::{dim_cusp_forms, dim_modular_symbols};
use eisrank::{IntMatrix, Integers};
use eisrank_cli::cache::keys;
use eisrank_cli::engine::SpaceSummary;
use eisrank_cli::sweep::{CheckOutcome, VerificationRecord};
use eisrank_cli::{Engine, SweepConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdicts(Vec<(String, bool)>);

impl Verdicts {
    fn report(&mut self, n: u32, title: &str, ok: bool, detail: String) {
        // Written to stderr directly so that the lines survive output capture.
        let _ = writeln!(std::io::stderr(), "criterion {n} {title}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        self.0.push((format!("{n} {title}"), ok));
    }
}

fn evaluated(records: &[VerificationRecord]) -> Vec<&VerificationRecord> {
    records.iter().filter(|r| r.hypotheses.all_ok && r.skip_reason.is_none()).collect()
}

fn count_fails(recs: &[&VerificationRecord], check: &str) -> (usize, Vec<String>) {
    let mut bad = vec![];
    let mut pass = 0;
    for r in recs {
        match r.check(check) {
            Some(CheckOutcome::Pass) => pass += 1,
            _ => bad.push(format!("({},{},{})", r.point.p, r.point.ell, r.point.k)),
        }
    }
    (pass, bad)
}

fn index_formula(v: &mut Verdicts, recs: &[&VerificationRecord], errors: &[String]) {
    let (pass, bad) = count_fails(recs, "index_match");
    let ok = bad.is_empty() && errors.is_empty() && !recs.is_empty();
    v.report(1, "index formula", ok, format!("{pass}/{} points, errors {errors:?}, mismatches {bad:?}", recs.len()));
}

fn rank_equivalence(v: &mut Verdicts, recs: &[&VerificationRecord]) {
    let (pass, bad) = count_fails(recs, "thmA_match");
    let big = recs.iter().filter(|r| r.hecke.as_ref().is_some_and(|h| h.rank > 1)).count();
    v.report(2, "rank equivalence", bad.is_empty(), format!("{pass}/{} points, {big} with rank > 1, mismatches {bad:?}", recs.len()));
}

fn principality(v: &mut Verdicts, recs: &[&VerificationRecord]) {
    let mut bad = vec![];
    let mut nonprincipal = 0;
    for r in recs {
        let h = r.hecke.as_ref().unwrap();
        let wake = r.invariants.as_ref().unwrap().invariant_values["wake"];
        let expected = r.point.k == 2 || !wake.is_pth_power;
        nonprincipal += (h.min_gens != 1) as usize;
        if (h.min_gens == 1) != expected || r.check("principality_match") != Some(&CheckOutcome::Pass) {
            bad.push(format!("({},{},{})", r.point.p, r.point.ell, r.point.k));
        }
    }
    v.report(3, "principality", bad.is_empty(), format!("{} points, {nonprincipal} non-principal, mismatches {bad:?}", recs.len()));
}

fn known_point(v: &mut Verdicts) {
    let t = Instant::now();
    let engine = Engine::new(HeckeConfig::default(), None);
    let pt = ParameterPoint::new(5, 11, 2).unwrap();
    let (h, _) = engine.local_report(5, 11, 2).unwrap();
    let m = merel_invariant(&pt).unwrap();
    let w = wake_unit(&pt).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let ok = (h.rank, h.index_valuation, h.min_gens) == (1, 1, 1)
        && m.value.value == 5
        && !m.is_pth_power
        && w.value.value == pt.p % pt.ell
        && secs < 10.0;
    v.report(
        4,
        "known point (5, 11, 2)",
        ok,
        format!(
            "rank {} index {} min_gens {} merel {} pth {} wake {} in {secs:.2}s",
            h.rank, h.index_valuation, h.min_gens, m.value.value, m.is_pth_power, w.value.value
        ),
    );
}

fn weight_stabilization(v: &mut Verdicts) {
    let w = weight_stabilization_check(7, 29, 4, 10, &HeckeConfig::default()).unwrap();
    v.report(5, "weight stabilization (7, 29, 4 vs 10)", w.equal, format!("dims {} and {}", w.dim_k, w.dim_k_prime));
}

fn brute_quotient(rows: &[Vec<i64>], n: usize, m: i64) -> usize {
    let mut span = HashSet::new();
    for idx in 0..(m as usize).pow(rows.len() as u32) {
        let mut c = idx;
        let mut x = vec![0i64; n];
        for row in rows {
            let a = (c % m as usize) as i64;
            c /= m as usize;
            for (t, b) in x.iter_mut().zip(row) {
                *t = (*t + a * b).rem_euclid(m);
            }
        }
        span.insert(x);
    }
    (m as usize).pow(n as u32) / span.len()
}

fn normal_forms_ok() -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = 0;
    let cases = 10_000;
    for _ in 0..cases {
        let (r, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|x| x.as_slice()).collect();
        let a = IntMatrix::from_i64(Integers, &refs);
        let d = snf(&a).invariant_factors;
        let h = hnf(&a);
        let hrows: Vec<Vec<i64>> =
            h.row_vecs().iter().map(|x| x.iter().map(|y| i64::try_from(y).unwrap()).collect()).collect();
        for m in [2i64, 3, 4, 5, 6, 8, 9] {
            let mut size = (m as usize).pow((n - d.len()) as u32);
            for f in &d {
                let g = num_integer::Integer::gcd(f, &m.into());
                size *= if f == &0.into() { m as usize } else { usize::try_from(&g).unwrap() };
            }
            let brute = brute_quotient(&rows, n, m);
            if size != brute || brute_quotient(&hrows, n, m) != brute {
                bad += 1;
                break;
            }
        }
    }
    (cases, bad)
}

fn pth_power_counts_ok() -> (usize, usize) {
    let mut checked = 0;
    let mut bad = 0;
    for ell in primes_up_to(200) {
        for p in primes_up_to(ell - 1).into_iter().filter(|p| (ell - 1) % p == 0) {
            let count = (1..ell).filter(|&x| is_pth_power(ResidueClass::new(x as i128, ell), p).unwrap()).count();
            checked += 1;
            bad += (count as u64 != (ell - 1) / p) as usize;
        }
    }
    (checked, bad)
}

fn wake_invariance_ok() -> (usize, usize) {
    let mut checked = 0;
    let mut bad = 0;
    for p in [5u64, 7] {
        for ell in primes_up_to(100).into_iter().filter(|l| l % p == 1) {
            for k in [2u32, 4, 6, 8, 10] {
                let pt = ParameterPoint::new(p, ell, k).unwrap();
                let flags: HashSet<bool> = (2..ell)
                    .filter(|&z| eisrank::arith::pow_mod_u64(z, p, ell) == 1)
                    .map(|z| wake_unit_with_root(&pt, ResidueClass::new(z as i128, ell)).unwrap().is_pth_power)
                    .collect();
                checked += 1;
                bad += (flags.len() != 1) as usize;
            }
        }
    }
    (checked, bad)
}

/// Dimensions and commutativity of every plus space built by the sweep.
fn spaces_ok(engine: &Engine, recs: &[&VerificationRecord]) -> (usize, Vec<String>) {
    let cache = engine.cache.as_ref().unwrap();
    let mut bad = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in recs {
        let (p, l, k) = (r.point.p, r.point.ell, r.point.k);
        let tag = format!("({p},{l},{k})");
        let Some(meta) = cache.get::<SpaceSummary>(&keys::modsym_space(p, l, k)) else {
            bad.push(format!("{tag} not cached"));
            continue;
        };
        let dims_ok = meta.dim == dim_modular_symbols(l, k)
            && meta.cuspidal_dim == 2 * dim_cusp_forms(l, k)
            && meta.plus_dim == dim_cusp_forms(l, k)
            && r.hecke.as_ref().unwrap().algebra_dim == meta.plus_dim;
        let ops = engine.plus_operators(p, l, k).unwrap();
        let mats = ops.matrices();
        let ring = ops.ring;
        let probe: Vec<u64> = (0..ops.dim()).map(|_| ring.from_std(rng.gen_range(0..ring.modulus()))).collect();
        let images: Vec<Vec<u64>> = mats.iter().map(|m| m.mul_vec(&probe)).collect();
        let mut commute = true;
        for i in 0..mats.len() {
            for j in 0..i {
                commute &= mats[i].mul_vec(&images[j]) == mats[j].mul_vec(&images[i]);
            }
            // Full products against w and the first Hecke operator.
            for j in 0..i.min(2) {
                commute &= mats[i].commutes_with(&mats[j]);
            }
        }
        if !dims_ok || !commute {
            bad.push(format!("{tag} dims {dims_ok} commute {commute}"));
        }
    }
    (recs.len(), bad)
}

fn weight_two_consistency(v: &mut Verdicts, recs: &[&VerificationRecord]) {
    let k2: Vec<&&VerificationRecord> = recs.iter().filter(|r| r.point.k == 2).collect();
    let mut bad = vec![];
    for r in &k2 {
        let inv = &r.invariants.as_ref().unwrap().invariant_values;
        if inv["merel"].is_pth_power != inv["lecouturier"].is_pth_power
            || r.check("k2_corollary_consistency") != Some(&CheckOutcome::Pass)
        {
            bad.push(format!("({},{})", r.point.p, r.point.ell));
        }
    }
    v.report(7, "weight-two flag consistency", bad.is_empty() && !k2.is_empty(), format!("{} points, mismatches {bad:?}", k2.len()));
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cfg = SweepConfig {
        primes_p: vec![5, 7, 13],
        ell_max: 200,
        weights_k: vec![2, 4, 6, 8, 10],
        resource_bound: 6000,
        jobs,
        cache_dir: Some(dir.path().into()),
        ..Default::default()
    };
    let engine = cfg.engine().unwrap();
    let t = Instant::now();
    let out = eisrank_cli::sweep::sweep_with(&cfg, &engine).unwrap();
    let _ = writeln!(
        std::io::stderr(),
        "sweep: {} points, {} skipped, {} errors, {:.1}s on {jobs} threads",
        out.summary.points,
        out.summary.skipped,
        out.summary.errors,
        t.elapsed().as_secs_f64()
    );
    let errors: Vec<String> = out
        .records
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("({},{},{}): {e}", r.point.p, r.point.ell, r.point.k)))
        .collect();
    let recs: Vec<&VerificationRecord> = evaluated(&out.records).into_iter().filter(|r| r.error.is_none()).collect();

    let mut v = Verdicts(vec![]);
    index_formula(&mut v, &recs, &errors);
    rank_equivalence(&mut v, &recs);
    principality(&mut v, &recs);
    known_point(&mut v);
    weight_stabilization(&mut v);

    let (nf_cases, nf_bad) = normal_forms_ok();
    let (pth_cases, pth_bad) = pth_power_counts_ok();
    let (wake_cases, wake_bad) = wake_invariance_ok();
    let (space_cases, space_bad) = spaces_ok(&engine, &recs);
    v.report(
        6,
        "property suites",
        nf_bad == 0 && pth_bad == 0 && wake_bad == 0 && space_bad.is_empty(),
        format!(
            "normal forms {}/{nf_cases}, p-th power counts {}/{pth_cases}, root invariance {}/{wake_cases}, spaces {}/{space_cases} {space_bad:?}",
            nf_cases - nf_bad,
            pth_cases - pth_bad,
            wake_cases - wake_bad,
            space_cases - space_bad.len()
        ),
    );
    weight_two_consistency(&mut v, &recs);

    let failed: Vec<&String> = v.0.iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
