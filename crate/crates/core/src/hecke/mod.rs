//! The cuspidal Hecke algebra at the Eisenstein maximal ideal.
//!
//! The algebra 𝕋⁰ ⊗ ℤ_p is realized as its regular representation on the
//! cyclic module `Λ = 𝕋·v ⊂ S⁺` for a random `v` in the plus part of the
//! cuspidal modular symbols. In weights below 12 there are no old forms at
//! prime level, so `S⁺ ⊗ ℚ_p` is free of rank one and `t ↦ t·v` identifies
//! 𝕋 with Λ. All invariants are read off from lattices in `Λ ≅ ℤ_p^d`.

mod exact;

pub use exact::{build_integral_hecke_algebra, IntegralHeckeAlgebra};

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::linalg::{
    algebra_closure, charpoly, common_generalized_kernel, log_colength, row_reduce_lossy, snf_with_transforms,
    AlgebraClosure, LatticeBuilder, Matrix, MatrixDump,
};
use crate::modsym::{ManinSymbolSpace, OperatorName, SubspaceTag, DEFAULT_RESOURCE_BOUND};
use crate::ring::{LocalRing, PadicTruncation, Pir, PrimeField, Ring};

/// Digits that must survive all precision losses before analysis starts.
const MIN_DIGITS: u32 = 6;

/// `⌈k(ℓ + 1)/12⌉`.
pub fn sturm_bound(l: u64, k: u32) -> u64 {
    (k as u64 * (l + 1)).div_ceil(12)
}

/// `w_ℓ` followed by `T_q` for primes `q ≤` the Sturm bound, `q ≠ ℓ`.
pub fn hecke_generators(l: u64, k: u32) -> Vec<OperatorName> {
    let mut g = vec![OperatorName::AtkinLehner];
    g.extend(primes_up_to(sturm_bound(l, k)).into_iter().filter(|&q| q != l).map(OperatorName::Hecke));
    g
}

/// Eigenvalue of `op` on the Eisenstein series cut out by the Eisenstein ideal.
pub fn eisenstein_eigenvalue<R: Ring>(r: &R, op: &OperatorName, k: u32) -> R::Elem {
    match op {
        OperatorName::AtkinLehner => r.from_i64(-1),
        OperatorName::Hecke(q) => r.add(&r.one(), &r.pow(&r.from_i64(*q as i64), k as u64 - 1)),
        OperatorName::Star => r.one(),
    }
}

/// Knobs for the randomized parts of the construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeConfig {
    pub seed: u64,
    /// Attempts at finding a cyclic vector before giving up.
    pub max_attempts: u32,
    /// Run the characteristic-polynomial rank oracle when the algebra has at most this dimension.
    pub flatness_limit: usize,
    /// Random elements tried by that oracle.
    pub flatness_trials: u32,
    /// Rebuild the algebra on the full cuspidal space and compare after alignment.
    pub cuspidal_check: bool,
    /// Compute the tangent space of 𝕋_𝔪 from the full space of modular symbols.
    pub full_space_check: bool,
    pub resource_bound: u64,
}

impl Default for HeckeConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            max_attempts: 6,
            flatness_limit: 40,
            flatness_trials: 8,
            cuspidal_check: false,
            full_space_check: false,
            resource_bound: DEFAULT_RESOURCE_BOUND,
        }
    }
}

fn point_rng(seed: u64, p: u64, l: u64, k: u32, salt: u64) -> ChaCha8Rng {
    let mix = seed
        ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ l.wrapping_mul(0xc2b2_ae3d_27d4_eb4f)
        ^ (k as u64).wrapping_mul(0x1656_67b1_9e37_79f9)
        ^ salt.wrapping_mul(0x27d4_eb2f_1656_67c5);
    ChaCha8Rng::seed_from_u64(mix)
}

fn random_vector(r: &PadicTruncation, n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..n).map(|_| r.from_std(rng.gen_range(0..r.modulus()))).collect()
}

fn retruncate(m: &Matrix<PadicTruncation>, to: &PadicTruncation) -> Matrix<PadicTruncation> {
    let from = *m.ring();
    m.convert(to, |x| to.reduce_from(&from, *x))
}

fn mod_p(m: &Matrix<PadicTruncation>) -> Result<Matrix<PrimeField>> {
    let r = *m.ring();
    let f = PrimeField::new(r.prime())?;
    Ok(m.convert(&f, |x| r.reduce_to_fp(x, r.prime())))
}

/// Pairwise commutativity, tested on a random vector.
fn check_commuting<R: LocalRing>(mats: &[Matrix<R>], probe: &[R::Elem], loss: u32, what: &str) -> Result<()> {
    let images: Vec<Vec<R::Elem>> = mats.iter().map(|m| m.mul_vec(probe)).collect();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let a = Matrix::from_rows(mats[i].ring().clone(), vec![mats[i].mul_vec(&images[j])])?;
            let b = Matrix::from_rows(mats[i].ring().clone(), vec![mats[j].mul_vec(&images[i])])?;
            if !a.agrees_with(&b, loss) {
                return Err(Error::CommutativityViolation(format!("{what}: generators {i} and {j}")));
            }
        }
    }
    Ok(())
}

/// Generators of the Hecke algebra restricted to the plus part of the cuspidal symbols.
#[derive(Clone, Debug)]
pub struct PlusOperators {
    pub p: u64,
    pub level: u64,
    pub weight: u32,
    /// Truncated to the digits that are known to be correct.
    pub ring: PadicTruncation,
    pub ops: Vec<(OperatorName, Matrix<PadicTruncation>)>,
}

impl PlusOperators {
    /// Compute every generator and run the build-time sanity checks: `w² = 1`,
    /// commutativity, and presence of the Eisenstein eigensystem on the full space.
    pub fn from_space(space: &ManinSymbolSpace<PadicTruncation>) -> Result<Self> {
        let r0 = *space.ring();
        let (l, k) = (space.level(), space.weight());
        let loss = space.precision_loss();
        let digits = r0.precision().saturating_sub(loss);
        if digits < MIN_DIGITS {
            return Err(Error::Precision(format!("only {digits} reliable digits after building the space")));
        }
        let ring = r0.truncate(digits)?;
        let gens = hecke_generators(l, k);
        let mut full_w = None;
        let mut full_t = None;
        let mut ops = Vec::with_capacity(gens.len());
        for g in &gens {
            let full = match g {
                OperatorName::AtkinLehner => space.atkin_lehner_matrix(),
                OperatorName::Hecke(q) => space.hecke_matrix(*q)?,
                OperatorName::Star => unreachable!("star is not a generator"),
            };
            let plus = retruncate(&space.restrict_to(&full, SubspaceTag::CuspidalPlus)?, &ring);
            match g {
                OperatorName::AtkinLehner => full_w = Some(full),
                OperatorName::Hecke(_) if full_t.is_none() => full_t = Some((g.clone(), full)),
                _ => {}
            }
            ops.push((g.clone(), plus));
        }

        // The Eisenstein eigensystem must occur on the full space.
        let (w, (tg, t)) = (full_w.unwrap(), full_t.expect("some prime below the Sturm bound"));
        let stacked = t
            .shift(&eisenstein_eigenvalue(&r0, &tg, k))
            .vstack(&w.shift(&eisenstein_eigenvalue(&r0, &OperatorName::AtkinLehner, k)));
        if row_reduce_lossy(&stacked, loss).rank() >= space.dim() {
            return Err(Error::Consistency(format!("no Eisenstein eigenvector for level {l}, weight {k}")));
        }

        let out = Self { p: ring.prime(), level: l, weight: k, ring, ops };
        let w = &out.ops[0].1;
        if !w.mul(w).is_identity() {
            return Err(Error::Consistency("w is not an involution on the plus space".into()));
        }
        let mut rng = point_rng(0, out.p, l, k, 1);
        let probe = random_vector(&ring, out.dim(), &mut rng);
        check_commuting(&out.matrices(), &probe, 0, "plus space")?;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.ops.first().map_or(0, |o| o.1.rows())
    }

    pub fn matrices(&self) -> Vec<Matrix<PadicTruncation>> {
        self.ops.iter().map(|o| o.1.clone()).collect()
    }

    pub fn generators(&self) -> Vec<OperatorName> {
        self.ops.iter().map(|o| o.0.clone()).collect()
    }

    pub fn dumps(&self) -> Vec<(OperatorName, MatrixDump)> {
        self.ops.iter().map(|(g, m)| (g.clone(), m.to_dump())).collect()
    }

    pub fn from_dumps(p: u64, level: u64, weight: u32, digits: u32, dumps: &[(OperatorName, MatrixDump)]) -> Result<Self> {
        let ring = PadicTruncation::new(p, digits)?;
        let ops = dumps
            .iter()
            .map(|(g, d)| Ok((g.clone(), Matrix::from_dump(ring, d)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, level, weight, ring, ops })
    }

    /// `dim_{𝔽_p}` of the Eisenstein-local part of `S⁺ ⊗ 𝔽_p`, which equals the rank of 𝕋⁰_𝔪.
    pub fn module_rank(&self) -> Result<usize> {
        local_dimension(&self.generators(), &self.matrices(), self.weight)
    }
}

fn local_dimension(gens: &[OperatorName], mats: &[Matrix<PadicTruncation>], k: u32) -> Result<usize> {
    let Some(first) = mats.first() else { return Ok(0) };
    if first.rows() == 0 {
        return Ok(0);
    }
    let xs = gens
        .iter()
        .zip(mats)
        .map(|(g, m)| mod_p(&m.shift(&eisenstein_eigenvalue(m.ring(), g, k))))
        .collect::<Result<Vec<_>>>()?;
    Ok(common_generalized_kernel(&xs, first.rows())?.dim())
}

/// Echelon basis of a cyclic lattice, restricted to rows carrying real information.
struct CyclicBasis {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    log_index: u32,
}

impl CyclicBasis {
    /// Rows whose pivot valuation is below `cutoff`; deeper rows are artifacts of
    /// working modulo `p^N` and are dropped.
    fn new(lat: &LatticeBuilder<PadicTruncation>, r: &PadicTruncation, cutoff: u32) -> Self {
        let mut rows = vec![];
        let mut pivots = vec![];
        let mut log_index = 0;
        for (c, row) in lat.echelon_rows() {
            let v = r.precision_cost(&row[c]);
            if v < cutoff {
                rows.push(row.to_vec());
                pivots.push(c);
                log_index += v;
            }
        }
        Self { rows, pivots, log_index }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Forward substitution along the pivot columns. The residual must vanish to `digits - loss`.
    fn coordinates(&self, r: &PadicTruncation, y: &[u64], reliable: u32) -> Option<Vec<u64>> {
        let mut x = y.to_vec();
        let mut out = Vec::with_capacity(self.rank());
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = r.div_exact(&x[c], &row[c])?;
            let nq = r.neg(&q);
            for (t, s) in x.iter_mut().zip(row) {
                r.mul_add_assign(t, &nq, s);
            }
            out.push(q);
        }
        x.iter().all(|a| r.precision_cost(a) >= reliable).then_some(out)
    }
}

fn cyclic_lattice(ring: &PadicTruncation, mats: &[Matrix<PadicTruncation>], v: &[u64]) -> LatticeBuilder<PadicTruncation> {
    let mut lat = LatticeBuilder::new(*ring, v.len());
    let mut queue = VecDeque::new();
    if lat.insert(v) {
        queue.push_back(v.to_vec());
    }
    while let Some(u) = queue.pop_front() {
        for m in mats {
            let x = m.mul_vec(&u);
            if lat.insert(&x) {
                queue.push_back(x);
            }
        }
    }
    lat
}

/// Regular representation of `ℤ_p[mats]` on the cyclic module generated by `v`.
struct RegularRep {
    ring: PadicTruncation,
    matrices: Vec<Matrix<PadicTruncation>>,
    unit: Vec<u64>,
    basis: CyclicBasis,
}

fn regular_representation(
    ring: &PadicTruncation,
    mats: &[Matrix<PadicTruncation>],
    v: &[u64],
    expected_rank: usize,
) -> Option<RegularRep> {
    let n = ring.precision();
    let lat = cyclic_lattice(ring, mats, v);
    let basis = CyclicBasis::new(&lat, ring, n / 2);
    if basis.rank() != expected_rank {
        return None;
    }
    // Each forward substitution loses at most the total pivot valuation.
    let s = basis.log_index;
    if n < 2 * s + MIN_DIGITS {
        return None;
    }
    let reliable = n - s;
    let out_ring = ring.truncate(n - 2 * s).ok()?;
    let d = basis.rank();
    let mut matrices = Vec::with_capacity(mats.len());
    for m in mats {
        let mut cols = Vec::with_capacity(d);
        for h in &basis.rows {
            cols.push(basis.coordinates(ring, &m.mul_vec(h), reliable)?);
        }
        let mt = Matrix::from_rows(*ring, cols).ok()?.transpose();
        matrices.push(retruncate(&mt, &out_ring));
    }
    let unit = basis
        .coordinates(ring, v, reliable)?
        .iter()
        .map(|x| out_ring.reduce_from(ring, *x))
        .collect();
    Some(RegularRep { ring: out_ring, matrices, unit, basis })
}

/// The cuspidal Hecke algebra tensored with ℤ_p, in its regular representation.
///
/// `matrices[i]` is multiplication by `generators[i]` on a ℤ_p-basis of the
/// algebra (column convention); `unit` holds the coordinates of `1`.
#[derive(Clone, Debug)]
pub struct HeckeAlgebraData {
    pub p: u64,
    pub level: u64,
    pub weight: u32,
    pub sturm_bound: u64,
    pub generators: Vec<OperatorName>,
    pub ring: PadicTruncation,
    pub matrices: Vec<Matrix<PadicTruncation>>,
    pub unit: Vec<u64>,
    /// `log_p [S⁺ : 𝕋·v]`.
    pub lattice_index: u32,
}

/// JSON form of [`HeckeAlgebraData`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeckeAlgebraDump {
    pub p: u64,
    pub level: u64,
    pub weight: u32,
    pub sturm_bound: u64,
    pub generators: Vec<OperatorName>,
    pub digits: u32,
    pub matrices: Vec<MatrixDump>,
    pub unit: Vec<String>,
    pub lattice_index: u32,
}

impl HeckeAlgebraData {
    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn digits(&self) -> u32 {
        self.ring.precision()
    }

    /// Multiplication by `g - χ(g)` for each generator `g`.
    pub fn eisenstein_matrices(&self) -> Vec<Matrix<PadicTruncation>> {
        self.generators
            .iter()
            .zip(&self.matrices)
            .map(|(g, m)| m.shift(&eisenstein_eigenvalue(&self.ring, g, self.weight)))
            .collect()
    }

    /// Coordinates of the generators `w + 1`, `T_q - (1 + q^(k-1))` of the Eisenstein ideal.
    pub fn eis_generators(&self) -> Vec<Vec<u64>> {
        self.eisenstein_matrices().iter().map(|x| x.mul_vec(&self.unit)).collect()
    }

    /// The same algebra with fewer digits.
    pub fn truncated(&self, digits: u32) -> Result<Self> {
        if digits > self.digits() {
            return Err(Error::Precision(format!("{digits} digits requested, {} available", self.digits())));
        }
        let ring = self.ring.truncate(digits)?;
        Ok(Self {
            ring,
            matrices: self.matrices.iter().map(|m| retruncate(m, &ring)).collect(),
            unit: self.unit.iter().map(|x| ring.reduce_from(&self.ring, *x)).collect(),
            generators: self.generators.clone(),
            ..*self
        })
    }

    /// ℤ_p-basis and structure constants, via the generic closure algorithm.
    /// Cost grows like `dim⁴`; intended for small algebras.
    pub fn structure_constants(&self) -> Result<AlgebraClosure<PadicTruncation>> {
        algebra_closure(&self.matrices)
    }

    pub fn to_dump(&self) -> HeckeAlgebraDump {
        HeckeAlgebraDump {
            p: self.p,
            level: self.level,
            weight: self.weight,
            sturm_bound: self.sturm_bound,
            generators: self.generators.clone(),
            digits: self.digits(),
            matrices: self.matrices.iter().map(|m| m.to_dump()).collect(),
            unit: self.unit.iter().map(|x| self.ring.to_decimal(x)).collect(),
            lattice_index: self.lattice_index,
        }
    }

    pub fn from_dump(d: &HeckeAlgebraDump) -> Result<Self> {
        let ring = PadicTruncation::new(d.p, d.digits)?;
        let matrices = d.matrices.iter().map(|m| Matrix::from_dump(ring, m)).collect::<Result<Vec<_>>>()?;
        let unit = d
            .unit
            .iter()
            .map(|s| ring.parse_decimal(s).ok_or_else(|| Error::Dump(format!("bad entry {s}"))))
            .collect::<Result<Vec<_>>>()?;
        if matrices.len() != d.generators.len() || matrices.iter().any(|m| m.rows() != unit.len() || !m.is_square()) {
            return Err(Error::Dump("inconsistent algebra dump".into()));
        }
        Ok(Self {
            p: d.p,
            level: d.level,
            weight: d.weight,
            sturm_bound: d.sturm_bound,
            generators: d.generators.clone(),
            ring,
            matrices,
            unit,
            lattice_index: d.lattice_index,
        })
    }
}

/// Build the regular representation of 𝕋⁰ ⊗ ℤ_p from the plus-space generators.
pub fn build_hecke_algebra(ops: &PlusOperators, cfg: &HeckeConfig) -> Result<HeckeAlgebraData> {
    let (p, l, k) = (ops.p, ops.level, ops.weight);
    let d = ops.dim();
    let mut alg = HeckeAlgebraData {
        p,
        level: l,
        weight: k,
        sturm_bound: sturm_bound(l, k),
        generators: ops.generators(),
        ring: ops.ring,
        matrices: ops.ops.iter().map(|_| Matrix::zeros(ops.ring, 0, 0)).collect(),
        unit: vec![],
        lattice_index: 0,
    };
    if d == 0 {
        return Ok(alg);
    }
    let mats = ops.matrices();
    let mut rng = point_rng(cfg.seed, p, l, k, 2);
    for _ in 0..cfg.max_attempts.max(1) {
        let v = random_vector(&ops.ring, d, &mut rng);
        let Some(rep) = regular_representation(&ops.ring, &mats, &v, d) else { continue };
        alg.ring = rep.ring;
        alg.matrices = rep.matrices;
        alg.unit = rep.unit;
        alg.lattice_index = rep.basis.log_index;
        let probe = random_vector(&alg.ring, d, &mut rng);
        check_commuting(&alg.matrices, &probe, 0, "regular representation")?;
        return Ok(alg);
    }
    Err(Error::Precision(format!(
        "no cyclic vector with small index found for p={p}, level {l}, weight {k}"
    )))
}

/// `rank_{ℤ_p} 𝕋⁰_𝔪`: the dimension of the common generalized kernel of the
/// Eisenstein generators acting on `𝕋⁰ ⊗ 𝔽_p`.
pub fn eisenstein_rank(alg: &HeckeAlgebraData) -> Result<usize> {
    local_dimension(&alg.generators, &alg.matrices, alg.weight)
}

/// The quotient `𝕋⁰_𝔪 / I ≅ ℤ/p^e` and the map to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinQuotient {
    pub valuation: u32,
    /// The same valuation read off the Smith form.
    pub snf_valuation: u32,
    /// `φ(e_j) ∈ [0, p^e)` for the basis vectors; `φ(1) = 1`.
    pub phi: Vec<u64>,
}

fn ideal_lattice(ring: &PadicTruncation, xs: &[Matrix<PadicTruncation>]) -> LatticeBuilder<PadicTruncation> {
    let d = xs.first().map_or(0, |x| x.rows());
    let mut lat = LatticeBuilder::new(*ring, d);
    for x in xs {
        for j in 0..d {
            lat.insert(&x.column(j));
        }
    }
    lat
}

/// `e = log_p |𝕋⁰_𝔪 / I^{eis,0}|` together with the quotient map.
pub fn eisenstein_index(alg: &HeckeAlgebraData) -> Result<EisensteinQuotient> {
    let d = alg.dim();
    if d == 0 {
        return Ok(EisensteinQuotient { valuation: 0, snf_valuation: 0, phi: vec![] });
    }
    let r = alg.ring;
    let p = alg.p;
    let lat = ideal_lattice(&r, &alg.eisenstein_matrices());
    let basis = lat.basis();
    if basis.rows() != d || !lat.is_full() {
        return Err(Error::Consistency("Eisenstein ideal does not have finite index".into()));
    }
    let e = lat.log_index(p).unwrap();
    if e + MIN_DIGITS > alg.digits() {
        return Err(Error::Precision(format!("index p^{e} too close to the working precision")));
    }
    let snf = snf_with_transforms(&basis);
    let vals: Vec<u32> = snf.d.iter().map(|x| r.precision_cost(x)).collect();
    let snf_valuation: u32 = vals.iter().sum();
    let nonunits: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0).collect();
    if nonunits.len() > 1 {
        return Err(Error::Consistency(format!("𝕋/I is not cyclic: valuations {vals:?}")));
    }
    let mut phi = vec![0u64; d];
    if let Some(&i) = nonunits.first() {
        // 𝕋/I ≅ ℤ/p^e via x ↦ (x·V)_i, rescaled so that 1 ↦ 1.
        let col = snf.v.column(i);
        let mut at_one = r.zero();
        for (u, c) in alg.unit.iter().zip(&col) {
            r.mul_add_assign(&mut at_one, u, c);
        }
        let inv = r
            .inv(&at_one)
            .ok_or_else(|| Error::Consistency("1 does not generate 𝕋/I".into()))?;
        let pe = p.pow(vals[i]);
        for (f, c) in phi.iter_mut().zip(&col) {
            *f = r.to_std(r.mul(c, &inv)) % pe;
        }
    }
    Ok(EisensteinQuotient { valuation: e, snf_valuation, phi })
}

fn scaled(r: &PadicTruncation, v: &[u64], c: &u64) -> Vec<u64> {
    v.iter().map(|x| r.mul(x, c)).collect()
}

/// `log_p [I : pI + I²]` computed modulo `p^n`.
fn min_gens_at(alg: &HeckeAlgebraData, n: u32) -> Result<u32> {
    let a = alg.truncated(n)?;
    let r = a.ring;
    let xs = a.eisenstein_matrices();
    let ideal = ideal_lattice(&r, &xs);
    let mut smaller = LatticeBuilder::new(r, a.dim());
    let pe = r.from_i64(a.p as i64);
    for b in ideal.basis().row_vecs() {
        smaller.insert(&scaled(&r, &b, &pe));
        for x in &xs {
            smaller.insert(&x.mul_vec(&b));
        }
    }
    Ok(log_colength(&smaller, a.p, n) - log_colength(&ideal, a.p, n))
}

/// `dim_{𝔽_p} I/𝔪I`: the minimal number of generators of the Eisenstein ideal of 𝕋⁰_𝔪.
///
/// Computed modulo `p^(e+2)` and re-checked modulo `p^(e+3)`.
pub fn min_generators_eis(alg: &HeckeAlgebraData, e: u32) -> Result<u32> {
    let a = min_gens_at(alg, e + 2)?;
    let b = min_gens_at(alg, e + 3)?;
    if a != b {
        return Err(Error::Consistency(format!("generator count changed with precision: {a} vs {b}")));
    }
    Ok(a)
}

/// Tangent dimension of `𝕋⁰_𝔪 ×_{ℤ/p^e} ℤ_p` modulo `p^n`.
fn tangent_at(alg: &HeckeAlgebraData, q: &EisensteinQuotient, n: u32) -> Result<u32> {
    let a = alg.truncated(n)?;
    let r = a.ring;
    let p = a.p;
    let d = a.dim();
    let e = q.valuation;
    let xs = a.eisenstein_matrices();
    let ideal = ideal_lattice(&r, &xs);
    let pr = r.from_i64(p as i64);
    let lift = |b: &[u64], last: u64| {
        let mut v = b.to_vec();
        v.push(last);
        v
    };
    let mut m = LatticeBuilder::new(r, d + 1);
    let mut w = LatticeBuilder::new(r, d + 1);
    for b in ideal.basis().row_vecs() {
        m.insert(&lift(&b, 0));
        for x in &xs {
            w.insert(&lift(&x.mul_vec(&b), 0));
        }
    }
    for j in 0..d {
        let mut ej = vec![r.zero(); d];
        ej[j] = pr;
        let v = lift(&ej, r.mul(&r.from_std(q.phi[j]), &pr));
        m.insert(&v);
        w.insert(&v);
    }
    let mut tail = vec![r.zero(); d];
    tail.push(r.from_std(p.pow(e)));
    m.insert(&tail);
    tail[d] = r.from_std(p.pow(e + 1));
    w.insert(&tail);
    Ok(log_colength(&w, p, n) - log_colength(&m, p, n))
}

/// `dim_{𝔽_p} tan(𝕋_𝔪/p)` for the fiber-product model of the full Hecke algebra.
pub fn tangent_dim_t(alg: &HeckeAlgebraData, q: &EisensteinQuotient) -> Result<u32> {
    if q.valuation == 0 {
        return Err(Error::Parameter("tangent space needs a nontrivial Eisenstein quotient".into()));
    }
    let e = q.valuation;
    let a = tangent_at(alg, q, e + 2)?;
    let b = tangent_at(alg, q, e + 3)?;
    if a != b {
        return Err(Error::Consistency(format!("tangent dimension changed with precision: {a} vs {b}")));
    }
    Ok(a)
}

/// Rank of 𝕋⁰_𝔪 counted on the characteristic-zero side: the number of roots of
/// positive valuation of the characteristic polynomial of a random element of
/// the Eisenstein ideal, minimized over several draws.
pub fn flatness_rank(alg: &HeckeAlgebraData, trials: u32, seed: u64) -> Result<usize> {
    let d = alg.dim();
    if d == 0 {
        return Ok(0);
    }
    let r = alg.ring;
    let xs = alg.eisenstein_matrices();
    let mut rng = point_rng(seed, alg.p, alg.level, alg.weight, 3);
    let mut best = d;
    for _ in 0..trials.max(1) {
        let mut x = Matrix::zeros(r, d, d);
        for m in &xs {
            x = x.add(&m.scale(&r.from_i64(rng.gen_range(-50..=50))));
        }
        let c = charpoly(&x)?;
        // Newton polygon: roots of positive valuation = first unit coefficient.
        let count = c.iter().position(|a| r.is_unit(a)).unwrap_or(d);
        best = best.min(count);
    }
    Ok(best)
}

/// Results at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EisensteinLocalReport {
    pub rank: usize,
    pub index_valuation: u32,
    pub min_gens: u32,
    pub tangent_dim_t: Option<u32>,
    pub nonzero_localization: bool,
    /// `rank_{ℤ_p} 𝕋⁰ ⊗ ℤ_p`, the dimension of the cusp forms.
    pub algebra_dim: usize,
    /// Local dimension measured on the plus-space symbols instead of the algebra.
    pub module_rank: usize,
    pub index_via_snf: u32,
    pub flatness_rank: Option<usize>,
    pub lattice_index: u32,
    pub digits: u32,
    pub full_space_tangent: Option<u32>,
    pub cuspidal_aligned: Option<bool>,
}

/// Rank, index, generator count and tangent dimension from a built algebra.
pub fn analyze(alg: &HeckeAlgebraData, ops: &PlusOperators, cfg: &HeckeConfig) -> Result<EisensteinLocalReport> {
    let rank = eisenstein_rank(alg)?;
    let module_rank = ops.module_rank()?;
    if module_rank != rank {
        return Err(Error::Consistency(format!(
            "local rank {rank} from the algebra but {module_rank} from the symbols"
        )));
    }
    let flat = (alg.dim() <= cfg.flatness_limit)
        .then(|| flatness_rank(alg, cfg.flatness_trials, cfg.seed))
        .transpose()?;
    if let Some(f) = flat {
        if f != rank {
            return Err(Error::Consistency(format!("flatness oracle gives {f}, mod-p localization gives {rank}")));
        }
    }
    let mut report = EisensteinLocalReport {
        rank,
        index_valuation: 0,
        min_gens: 0,
        tangent_dim_t: None,
        nonzero_localization: rank > 0,
        algebra_dim: alg.dim(),
        module_rank,
        index_via_snf: 0,
        flatness_rank: flat,
        lattice_index: alg.lattice_index,
        digits: alg.digits(),
        full_space_tangent: None,
        cuspidal_aligned: None,
    };
    if rank == 0 {
        return Ok(report);
    }
    let q = eisenstein_index(alg)?;
    if q.valuation != q.snf_valuation {
        return Err(Error::Consistency(format!(
            "index {} from the Hermite form but {} from the Smith form",
            q.valuation, q.snf_valuation
        )));
    }
    report.index_valuation = q.valuation;
    report.index_via_snf = q.snf_valuation;
    if q.valuation == 0 {
        report.nonzero_localization = false;
        return Ok(report);
    }
    report.min_gens = min_generators_eis(alg, q.valuation)?;
    report.tangent_dim_t = Some(tangent_dim_t(alg, &q)?);
    Ok(report)
}

/// Build everything at one point `(p, ℓ, k)` from scratch.
pub fn compute_point(
    p: u64,
    l: u64,
    k: u32,
    cfg: &HeckeConfig,
) -> Result<(PlusOperators, HeckeAlgebraData, EisensteinLocalReport)> {
    let ring = PadicTruncation::new(p, PadicTruncation::max_precision(p))?;
    let space = ManinSymbolSpace::build(ring, l, k, cfg.resource_bound)?;
    let ops = PlusOperators::from_space(&space)?;
    let alg = build_hecke_algebra(&ops, cfg)?;
    let mut report = analyze(&alg, &ops, cfg)?;
    if report.index_valuation > 0 {
        if cfg.full_space_check {
            report.full_space_tangent = Some(full_space_tangent(&space, cfg)?);
        }
        if cfg.cuspidal_check {
            report.cuspidal_aligned = Some(cuspidal_alignment(&space, &ops, cfg)?);
        }
    }
    Ok((ops, alg, report))
}

/// Full-space operators truncated to their reliable digits.
fn full_operators(space: &ManinSymbolSpace<PadicTruncation>, tag: SubspaceTag) -> Result<(PadicTruncation, Vec<OperatorName>, Vec<Matrix<PadicTruncation>>)> {
    let r0 = *space.ring();
    let digits = r0.precision().saturating_sub(space.precision_loss());
    let ring = r0.truncate(digits)?;
    let gens = hecke_generators(space.level(), space.weight());
    let mut mats = Vec::with_capacity(gens.len());
    for g in &gens {
        let full = match g {
            OperatorName::AtkinLehner => space.atkin_lehner_matrix(),
            OperatorName::Hecke(q) => space.hecke_matrix(*q)?,
            OperatorName::Star => unreachable!(),
        };
        mats.push(retruncate(&space.restrict_to(&full, tag)?, &ring));
    }
    Ok((ring, gens, mats))
}

/// `dim_{𝔽_p} 𝔪/(𝔪² + p)` for the Hecke algebra of the full space of modular
/// symbols, Eisenstein part included.
pub fn full_space_tangent(space: &ManinSymbolSpace<PadicTruncation>, cfg: &HeckeConfig) -> Result<u32> {
    let (ring, gens, mats) = full_operators(space, SubspaceTag::Full)?;
    let k = space.weight();
    let eis_systems = if k == 2 { 1 } else { 2 };
    let expected = space.plus_dim() + eis_systems;
    let mut rng = point_rng(cfg.seed, ring.prime(), space.level(), k, 4);
    for _ in 0..cfg.max_attempts.max(1) {
        let v = random_vector(&ring, space.dim(), &mut rng);
        let Some(rep) = regular_representation(&ring, &mats, &v, expected) else { continue };
        let r = rep.ring.truncate(2)?;
        let p = r.prime();
        let xs: Vec<_> = gens
            .iter()
            .zip(&rep.matrices)
            .map(|(g, m)| retruncate(m, &r).shift(&eisenstein_eigenvalue(&r, g, k)))
            .collect();
        let pr = r.from_i64(p as i64);
        let mut big = LatticeBuilder::new(r, expected);
        let mut small = LatticeBuilder::new(r, expected);
        for j in 0..expected {
            let mut ej = vec![r.zero(); expected];
            ej[j] = pr;
            big.insert(&ej);
            small.insert(&ej);
        }
        let ideal = ideal_lattice(&r, &xs);
        for b in ideal.basis().row_vecs() {
            big.insert(&b);
            for x in &xs {
                small.insert(&x.mul_vec(&b));
            }
        }
        return Ok(log_colength(&small, p, 2) - log_colength(&big, p, 2));
    }
    Err(Error::Precision("no cyclic vector found on the full space".into()))
}

/// Rebuild the algebra on the full cuspidal space from `v⁺ + v⁻` and check that
/// projection to the plus part intertwines the two regular representations.
pub fn cuspidal_alignment(
    space: &ManinSymbolSpace<PadicTruncation>,
    ops: &PlusOperators,
    cfg: &HeckeConfig,
) -> Result<bool> {
    let (ring, _, cmats) = full_operators(space, SubspaceTag::Cuspidal)?;
    let d = ops.dim();
    let cusp = space.subspace(SubspaceTag::Cuspidal);
    let plus = space.subspace(SubspaceTag::CuspidalPlus);
    let minus = space.subspace(SubspaceTag::CuspidalMinus);
    let r0 = *space.ring();
    let loss = space.precision_loss();
    let lower = |v: Vec<u64>| -> Vec<u64> { v.iter().map(|x| ring.reduce_from(&r0, *x)).collect() };

    // (1 + star)/2 from cuspidal coordinates to plus coordinates, as a d × 2d matrix.
    let half = r0.inv(&r0.from_i64(2)).unwrap();
    let star = space.star_matrix();
    let mut proj_cols = Vec::with_capacity(cusp.dim());
    for i in 0..cusp.dim() {
        let c = cusp.basis().row(i);
        let sym: Vec<u64> = c.iter().zip(star.mul_vec(c)).map(|(a, b)| r0.mul(&r0.add(a, &b), &half)).collect();
        let pc = plus
            .coordinates_lossy(&sym, loss)
            .ok_or_else(|| Error::Consistency("projection leaves the plus space".into()))?;
        proj_cols.push(lower(pc));
    }
    let proj = Matrix::from_rows(ring, proj_cols)?.transpose();

    let mut rng = point_rng(cfg.seed, ring.prime(), space.level(), space.weight(), 5);
    for _ in 0..cfg.max_attempts.max(1) {
        let vp = random_vector(&r0, d, &mut rng);
        let vm = random_vector(&r0, d, &mut rng);
        let ambient: Vec<u64> = plus.combine(&vp).iter().zip(minus.combine(&vm)).map(|(a, b)| r0.add(a, &b)).collect();
        let vc = lower(
            cusp.coordinates_lossy(&ambient, loss)
                .ok_or_else(|| Error::Consistency("vector outside the cuspidal space".into()))?,
        );
        let Some(rep_c) = regular_representation(&ring, &cmats, &vc, d) else { continue };
        let Some(rep_p) = regular_representation(&ring, &ops.matrices(), &lower(vp), d) else { continue };
        let out = ring.truncate(rep_c.ring.precision().min(rep_p.ring.precision()))?;
        let reliable = ring.precision() - rep_p.basis.log_index;
        let mut cols = Vec::with_capacity(d);
        for h in &rep_c.basis.rows {
            let c = rep_p
                .basis
                .coordinates(&ring, &proj.mul_vec(h), reliable)
                .ok_or_else(|| Error::Consistency("projection leaves the cyclic plus lattice".into()))?;
            cols.push(c.iter().map(|x| out.reduce_from(&ring, *x)).collect::<Vec<_>>());
        }
        let pmat = Matrix::from_rows(out, cols)?.transpose();
        let invertible = row_reduce_lossy(&mod_p(&pmat)?, 0).rank() == d;
        let intertwines = rep_c.matrices.iter().zip(&rep_p.matrices).all(|(mc, mp)| {
            pmat.mul(&retruncate(mc, &out)).agrees_with(&retruncate(mp, &out).mul(&pmat), 0)
        });
        return Ok(invertible && intertwines);
    }
    Err(Error::Precision("no cyclic vector found on the cuspidal space".into()))
}

/// Eisenstein-local mod-p dimensions at two weights `k < k'` with `k ≡ k' mod p - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightStabilization {
    pub k: u32,
    pub k_prime: u32,
    pub dim_k: usize,
    pub dim_k_prime: usize,
    pub equal: bool,
}

pub fn weight_stabilization_check(p: u64, l: u64, k: u32, k_prime: u32, cfg: &HeckeConfig) -> Result<WeightStabilization> {
    if k <= 2 || k_prime <= k || (k_prime - k) as u64 % (p - 1) != 0 {
        return Err(Error::Parameter(format!(
            "need 2 < k < k' with k ≡ k' mod {}; got k={k}, k'={k_prime}",
            p - 1
        )));
    }
    let local = |w: u32| -> Result<usize> {
        let ring = PadicTruncation::new(p, PadicTruncation::max_precision(p))?;
        let space = ManinSymbolSpace::build(ring, l, w, cfg.resource_bound)?;
        let ops = PlusOperators::from_space(&space)?;
        eisenstein_rank(&build_hecke_algebra(&ops, cfg)?)
    };
    let (a, b) = (local(k)?, local(k_prime)?);
    Ok(WeightStabilization { k, k_prime, dim_k: a, dim_k_prime: b, equal: a == b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_bounds_and_generators() {
        assert_eq!(sturm_bound(11, 2), 2);
        assert_eq!(sturm_bound(197, 10), 165);
        let g = hecke_generators(11, 2);
        assert_eq!(g, vec![OperatorName::AtkinLehner, OperatorName::Hecke(2)]);
        assert!(!hecke_generators(13, 4).contains(&OperatorName::Hecke(13)));
    }

    #[test]
    fn level_eleven_weight_two_at_five() {
        let (_, alg, rep) = compute_point(5, 11, 2, &HeckeConfig::default()).unwrap();
        assert_eq!(alg.dim(), 1);
        assert_eq!((rep.rank, rep.index_valuation, rep.min_gens), (1, 1, 1));
        assert_eq!(rep.tangent_dim_t, Some(1));
        assert_eq!(rep.flatness_rank, Some(1));
    }

    #[test]
    fn level_eleven_weight_two_at_seven_is_not_eisenstein() {
        let (_, _, rep) = compute_point(7, 11, 2, &HeckeConfig::default()).unwrap();
        assert_eq!(rep.rank, 0);
        assert!(!rep.nonzero_localization);
    }

    #[test]
    fn dump_round_trip() {
        let (_, alg, _) = compute_point(5, 31, 2, &HeckeConfig::default()).unwrap();
        let back = HeckeAlgebraData::from_dump(&alg.to_dump()).unwrap();
        assert_eq!(back.to_dump(), alg.to_dump());
        assert_eq!(eisenstein_rank(&back).unwrap(), eisenstein_rank(&alg).unwrap());
    }
}
