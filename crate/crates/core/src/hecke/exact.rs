//! The same construction carried out over ℚ, for small spaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{eisenstein_eigenvalue, hecke_generators, sturm_bound, HeckeAlgebraData};
use crate::error::{Error, Result};
use crate::linalg::{algebra_closure, snf, LatticeBuilder, Matrix};
use crate::modsym::{ManinSymbolSpace, OperatorName, SubspaceTag};
use crate::ring::{Integers, PadicTruncation, Pir, Rationals, Ring};

/// A ℤ-lattice in ℚ^d stored as an integer lattice scaled by a common denominator.
struct RationalLattice {
    delta: BigInt,
    lat: LatticeBuilder<Integers>,
}

impl RationalLattice {
    fn new(d: usize) -> Self {
        Self { delta: BigInt::one(), lat: LatticeBuilder::new(Integers, d) }
    }

    fn insert(&mut self, v: &[BigRational]) -> bool {
        let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        if !(&self.delta % &den).is_zero() {
            let new = self.delta.lcm(&den);
            let factor = &new / &self.delta;
            let mut next = LatticeBuilder::new(Integers, self.lat.ambient_dim());
            for (_, row) in self.lat.echelon_rows() {
                let scaled: Vec<BigInt> = row.iter().map(|x| x * &factor).collect();
                next.insert(&scaled);
            }
            self.lat = next;
            self.delta = new;
        }
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &self.delta).to_integer()).collect();
        self.lat.insert(&ints)
    }

    fn basis(&self) -> Vec<Vec<BigRational>> {
        self.lat
            .echelon_rows()
            .map(|(_, row)| row.iter().map(|x| BigRational::new(x.clone(), self.delta.clone())).collect())
            .collect()
    }

    fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let scaled: Vec<BigRational> = v.iter().map(|x| x * BigRational::from(self.delta.clone())).collect();
        if scaled.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let ints: Vec<BigInt> = scaled.iter().map(|x| x.to_integer()).collect();
        self.lat.coordinates(&ints)
    }
}

/// 𝕋⁰ over ℤ in its regular representation: integer matrices for each generator
/// (column convention) and the coordinates of `1`.
#[derive(Clone, Debug)]
pub struct IntegralHeckeAlgebra {
    pub level: u64,
    pub weight: u32,
    pub generators: Vec<OperatorName>,
    pub matrices: Vec<Matrix<Integers>>,
    pub unit: Vec<BigInt>,
}

impl IntegralHeckeAlgebra {
    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    /// Reduce modulo `p^n`.
    pub fn to_padic(&self, p: u64, n: u32) -> Result<HeckeAlgebraData> {
        let r = PadicTruncation::new(p, n)?;
        Ok(HeckeAlgebraData {
            p,
            level: self.level,
            weight: self.weight,
            sturm_bound: sturm_bound(self.level, self.weight),
            generators: self.generators.clone(),
            ring: r,
            matrices: self.matrices.iter().map(|m| m.convert(&r, |x| r.from_bigint(x))).collect(),
            unit: self.unit.iter().map(|x| r.from_bigint(x)).collect(),
            lattice_index: 0,
        })
    }

    /// ℤ-rank of the ring generated by the matrices; equals `dim` for a faithful regular representation.
    pub fn closure_rank(&self) -> Result<usize> {
        if self.dim() == 0 {
            return Ok(0);
        }
        Ok(algebra_closure(&self.matrices)?.rank())
    }

    /// `v_p |𝕋⁰ / I|`, from the Smith form of the Eisenstein ideal over ℤ.
    pub fn eisenstein_index_exact(&self, p: u64) -> Result<u32> {
        let d = self.dim();
        let z = Integers;
        let mut lat = LatticeBuilder::new(z, d);
        for (g, m) in self.generators.iter().zip(&self.matrices) {
            let x = m.shift(&eisenstein_eigenvalue(&z, g, self.weight));
            for j in 0..d {
                lat.insert(&x.column(j));
            }
        }
        if !lat.is_full() {
            return Err(Error::Consistency("Eisenstein ideal has infinite index".into()));
        }
        let f = snf(&lat.basis()).invariant_factors;
        Ok(f.iter().map(|x| z.p_valuation(x, p).unwrap_or(0)).sum())
    }
}

fn small_random(state: &mut u64) -> i64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    ((*state >> 33) % 19) as i64 - 9
}

/// Build 𝕋⁰ over ℤ from the plus part of the rational cuspidal symbols.
///
/// Exponential blowup of coefficients makes this practical only for small levels.
pub fn build_integral_hecke_algebra(level: u64, weight: u32, resource_bound: u64, seed: u64) -> Result<IntegralHeckeAlgebra> {
    let q = Rationals;
    let space = ManinSymbolSpace::build(q, level, weight, resource_bound)?;
    let generators = hecke_generators(level, weight);
    let mut mats = Vec::with_capacity(generators.len());
    for g in &generators {
        let full = match g {
            OperatorName::AtkinLehner => space.atkin_lehner_matrix(),
            OperatorName::Hecke(n) => space.hecke_matrix(*n)?,
            OperatorName::Star => unreachable!(),
        };
        mats.push(space.restrict_to(&full, SubspaceTag::CuspidalPlus)?);
    }
    let d = space.plus_dim();
    let mut out = IntegralHeckeAlgebra { level, weight, generators, matrices: vec![], unit: vec![] };
    if d == 0 {
        return Ok(out);
    }
    let mut state = seed ^ level.wrapping_mul(31) ^ weight as u64;
    for _ in 0..8 {
        let v: Vec<BigRational> = (0..d).map(|_| q.from_i64(small_random(&mut state))).collect();
        let mut lat = RationalLattice::new(d);
        let mut queue = std::collections::VecDeque::new();
        if lat.insert(&v) {
            queue.push_back(v.clone());
        }
        while let Some(u) = queue.pop_front() {
            for m in &mats {
                let x = m.mul_vec(&u);
                if lat.insert(&x) {
                    queue.push_back(x);
                }
            }
        }
        if !lat.lat.is_full() {
            continue;
        }
        let basis = lat.basis();
        let mut int_mats = Vec::with_capacity(mats.len());
        for m in &mats {
            let cols = basis
                .iter()
                .map(|h| lat.coordinates(&m.mul_vec(h)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Consistency("cyclic lattice is not stable".into()))?;
            int_mats.push(Matrix::from_rows(Integers, cols)?.transpose());
        }
        out.unit = lat
            .coordinates(&v)
            .ok_or_else(|| Error::Consistency("generator outside its own lattice".into()))?;
        out.matrices = int_mats;
        return Ok(out);
    }
    Err(Error::Consistency(format!("no cyclic vector for level {level}, weight {weight}")))
}
