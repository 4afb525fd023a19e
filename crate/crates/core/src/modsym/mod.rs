//! Weight-k modular symbols for Γ₀(ℓ) via the Manin symbol presentation.
//!
//! A Manin symbol `[X^i Y^(k-2-i), (c:d)]` is stored at raw index
//! `point * (k - 1) + i`. Matrices act on the right:
//! `[P, (u, v)] · h = [P(aX + bY, cX + dY), (ua + vc, ub + vd)]`.
//! The quotient by the two- and three-term relations is computed over any
//! [`LocalRing`]; over ℤ/p^N the relation module is saturated, which is the
//! p-adic image of the integral symbols.

mod heilbronn;
mod p1;

pub use heilbronn::merel;
pub use p1::P1;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre};
use crate::error::{Error, Result};
use crate::linalg::{kernel_lossy, restrict_lossy, row_reduce, Matrix, Subspace};
use crate::ring::{LocalRing, Ring};

/// Default cap on `k(ℓ + 1)`.
pub const DEFAULT_RESOURCE_BOUND: u64 = 6000;

const SIGMA: [i64; 4] = [0, -1, 1, 0];
const TAU: [i64; 4] = [0, -1, 1, -1];
const TAU2: [i64; 4] = [-1, 1, -1, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceTag {
    Full,
    Cuspidal,
    CuspidalPlus,
    CuspidalMinus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorName {
    Hecke(u64),
    AtkinLehner,
    Star,
}

impl std::fmt::Display for OperatorName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OperatorName::Hecke(q) => write!(f, "T{q}"),
            OperatorName::AtkinLehner => write!(f, "w"),
            OperatorName::Star => write!(f, "star"),
        }
    }
}

impl std::str::FromStr for OperatorName {
    type Err = Error;

    /// Accepts `T<q>`, `w` and `star`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w" => Ok(OperatorName::AtkinLehner),
            "star" => Ok(OperatorName::Star),
            _ => s
                .strip_prefix('T')
                .and_then(|q| q.parse().ok())
                .map(OperatorName::Hecke)
                .ok_or_else(|| Error::Parameter(format!("unknown operator {s:?}"))),
        }
    }
}

/// An operator restricted to one of the standard subspaces; acts on column vectors.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<R: Ring> {
    pub name: OperatorName,
    pub subspace: SubspaceTag,
    pub matrix: Matrix<R>,
}

/// `dim S_k(Γ₀(ℓ))` for prime `ℓ` and even `k ≥ 2`.
pub fn dim_cusp_forms(l: u64, k: u32) -> usize {
    let (nu2, nu3): (i64, i64) = match l {
        2 => (1, 0),
        3 => (0, 1),
        _ => (1 + legendre(-1, l) as i64, 1 + legendre(-3, l) as i64),
    };
    let cusps = 2i64;
    // 12 (g - 1) = μ - 3ν₂ - 4ν₃ - 6c
    let twelve_gm1 = (l as i64 + 1) - 3 * nu2 - 4 * nu3 - 6 * cusps;
    debug_assert_eq!(twelve_gm1 % 12, 0);
    let gm1 = twelve_gm1 / 12;
    let k = k as i64;
    let d = if k == 2 {
        gm1 + 1
    } else {
        (k - 1) * gm1 + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3)
    };
    d.max(0) as usize
}

/// Expected dimension of the full space of modular symbols.
pub fn dim_modular_symbols(l: u64, k: u32) -> usize {
    let s = 2 * dim_cusp_forms(l, k);
    if k == 2 {
        s + 1
    } else {
        s + 2
    }
}

/// Homogeneous polynomials of degree `w`, coefficients indexed by the power of `X`.
fn poly_mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r.mul_add_assign(&mut out[i + j], x, y);
        }
    }
    out
}

/// `rows[i]` = coefficients of `(aX + bY)^i (cX + dY)^(w-i)`.
pub fn poly_action<R: Ring>(r: &R, w: usize, [a, b, c, d]: [i64; 4]) -> Vec<Vec<R::Elem>> {
    // Linear forms indexed by power of X: bY + aX and dY + cX.
    let l1 = vec![r.from_i64(b), r.from_i64(a)];
    let l2 = vec![r.from_i64(d), r.from_i64(c)];
    let mut p1 = vec![vec![r.one()]];
    let mut p2 = vec![vec![r.one()]];
    for i in 1..=w {
        p1.push(poly_mul(r, &p1[i - 1], &l1));
        p2.push(poly_mul(r, &p2[i - 1], &l2));
    }
    (0..=w).map(|i| poly_mul(r, &p1[i], &p2[w - i])).collect()
}

/// Apply `P ↦ P(aX + bY, cX + dY)` to a coefficient vector.
fn act_poly<R: Ring>(r: &R, coeffs: &[R::Elem], m: [i64; 4]) -> Vec<R::Elem> {
    let w = coeffs.len() - 1;
    let act = poly_action(r, w, m);
    let mut out = vec![r.zero(); w + 1];
    for (c, row) in coeffs.iter().zip(&act) {
        if r.is_zero(c) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            r.mul_add_assign(o, c, x);
        }
    }
    out
}

fn adj([a, b, c, d]: [i64; 4]) -> [i64; 4] {
    [d, -b, -c, a]
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

#[derive(Clone, Debug)]
enum FreeCoord {
    Basis(usize),
    Combo(usize),
}

/// The space of weight-k modular symbols for Γ₀(ℓ) over a local ring.
#[derive(Clone, Debug)]
pub struct ManinSymbolSpace<R: LocalRing> {
    ring: R,
    level: u64,
    weight: u32,
    p1: P1,
    /// Raw symbol to `(free generator, negated)`; `None` when the symbol vanishes.
    raw_to_free: Vec<Option<(usize, bool)>>,
    free_coord: Vec<FreeCoord>,
    /// Coordinates of the free generators that are not basis elements.
    combos: Matrix<R>,
    /// Raw index of each basis element.
    basis_raw: Vec<usize>,
    relation_rank: usize,
    boundary: Matrix<R>,
    cuspidal: Subspace<R>,
    star: Matrix<R>,
    plus: Subspace<R>,
    minus: Subspace<R>,
    precision_loss: u32,
}

impl<R: LocalRing> ManinSymbolSpace<R> {
    pub fn build(ring: R, level: u64, weight: u32, resource_bound: u64) -> Result<Self> {
        if !is_prime(level) {
            return Err(Error::Parameter(format!("level {level} is not prime")));
        }
        if weight < 2 || weight % 2 == 1 {
            return Err(Error::Parameter(format!(
                "weight {weight} is not even and >= 2"
            )));
        }
        let needed = weight as u64 * (level + 1);
        if needed > resource_bound {
            return Err(Error::ResourceBound {
                needed,
                bound: resource_bound,
            });
        }
        let p1 = P1::new(level);
        let w = weight as usize - 2;
        let npts = p1.len();
        let nraw = npts * (w + 1);
        let raw = |pt: usize, i: usize| pt * (w + 1) + i;
        let r = ring.clone();

        // Two-term relations x + xσ = 0, where [X^i Y^(w-i), (c:d)]σ = (-1)^i [X^(w-i) Y^i, (d:-c)].
        let mut raw_to_free: Vec<Option<(usize, bool)>> = vec![None; nraw];
        let mut seen = vec![false; nraw];
        let mut free_to_raw = vec![];
        for pt in 0..npts {
            let [_, _, c, d] = p1.lift(pt);
            let spt = p1.index(d, -c).expect("σ permutes P¹");
            for i in 0..=w {
                let j = raw(pt, i);
                if seen[j] {
                    continue;
                }
                let js = raw(spt, w - i);
                let sign_plus = i % 2 == 0;
                seen[j] = true;
                seen[js] = true;
                if js == j {
                    // x = -(±x): vanishes when the sign is +.
                    if !sign_plus {
                        raw_to_free[j] = Some((free_to_raw.len(), false));
                        free_to_raw.push(j);
                    }
                    continue;
                }
                let f = free_to_raw.len();
                free_to_raw.push(j);
                raw_to_free[j] = Some((f, false));
                // xσ = -x, so the partner equals -(sign) x.
                raw_to_free[js] = Some((f, sign_plus));
            }
        }
        let nfree = free_to_raw.len();

        // Three-term relations, one P¹ point per τ-orbit.
        let act_t = poly_action(&r, w, TAU);
        let act_t2 = poly_action(&r, w, TAU2);
        let mut orbit_done = vec![false; npts];
        let mut rel = Matrix::empty(r.clone(), nfree);
        for pt in 0..npts {
            if orbit_done[pt] {
                continue;
            }
            let [_, _, c, d] = p1.lift(pt);
            let pt1 = p1.index(d, -c - d).unwrap();
            let pt2 = p1.index(-c - d, c).unwrap();
            orbit_done[pt] = true;
            orbit_done[pt1] = true;
            orbit_done[pt2] = true;
            for i in 0..=w {
                let mut row = vec![r.zero(); nfree];
                let mut add = |j: usize, coeff: &R::Elem| {
                    if let Some((f, neg)) = raw_to_free[j] {
                        let c = if neg { r.neg(coeff) } else { coeff.clone() };
                        r.add_assign(&mut row[f], &c);
                    }
                };
                add(raw(pt, i), &r.one());
                for (m, x) in act_t[i].iter().enumerate() {
                    if !r.is_zero(x) {
                        add(raw(pt1, m), x);
                    }
                }
                for (m, x) in act_t2[i].iter().enumerate() {
                    if !r.is_zero(x) {
                        add(raw(pt2, m), x);
                    }
                }
                if row.iter().any(|x| !r.is_zero(x)) {
                    rel.push_row(&row);
                }
            }
        }
        let rr = row_reduce(&rel);
        let mut is_pivot = vec![None; nfree];
        for (ri, &c) in rr.pivots.iter().enumerate() {
            is_pivot[c] = Some(ri);
        }
        let basis_free: Vec<usize> = (0..nfree).filter(|&f| is_pivot[f].is_none()).collect();
        let dim = basis_free.len();
        let mut basis_index = vec![usize::MAX; nfree];
        for (b, &f) in basis_free.iter().enumerate() {
            basis_index[f] = b;
        }
        let mut combos = Matrix::zeros(r.clone(), rr.rank(), dim);
        let mut free_coord = Vec::with_capacity(nfree);
        for f in 0..nfree {
            match is_pivot[f] {
                None => free_coord.push(FreeCoord::Basis(basis_index[f])),
                Some(ri) => {
                    for (b, &g) in basis_free.iter().enumerate() {
                        combos.set(ri, b, r.neg(rr.matrix.get(ri, g)));
                    }
                    free_coord.push(FreeCoord::Combo(ri));
                }
            }
        }
        let basis_raw = basis_free.iter().map(|&f| free_to_raw[f]).collect();

        let expected = dim_modular_symbols(level, weight);
        if dim != expected {
            return Err(Error::Consistency(format!(
                "modular symbols of level {level}, weight {weight}: dimension {dim}, expected {expected}"
            )));
        }

        let mut space = Self {
            ring,
            level,
            weight,
            p1,
            raw_to_free,
            free_coord,
            combos,
            basis_raw,
            relation_rank: rr.rank(),
            boundary: Matrix::empty(r.clone(), 2),
            cuspidal: Subspace::full(r.clone(), 0),
            star: Matrix::identity(r.clone(), 0),
            plus: Subspace::full(r.clone(), 0),
            minus: Subspace::full(r.clone(), 0),
            precision_loss: rr.precision_loss,
        };
        space.boundary = space.boundary_matrix();
        let (cusp, loss) = kernel_lossy(&space.boundary.transpose(), space.precision_loss);
        space.cuspidal = Subspace::from_rows(&cusp);
        space.precision_loss = space
            .precision_loss
            .max(loss)
            .max(space.cuspidal.precision_loss());
        let sdim = dim_cusp_forms(level, weight);
        if space.cuspidal.dim() != 2 * sdim {
            return Err(Error::Consistency(format!(
                "cuspidal dimension {} but 2 dim S_k = {}",
                space.cuspidal.dim(),
                2 * sdim
            )));
        }
        space.star = space.act_on_basis(&[[-1, 0, 0, 1]]);
        // The eigenspaces of star are the images of the projectors (1 ± star)/2,
        // which are direct summands because 2 is a unit.
        let half = r
            .inv(&r.from_i64(2))
            .ok_or_else(|| Error::InvalidRing("2 is not invertible".into()))?;
        for sign in [1i64, -1] {
            let sg = r.from_i64(sign);
            let mut img = Matrix::empty(r.clone(), dim);
            for i in 0..space.cuspidal.dim() {
                let c = space.cuspidal.basis().row(i);
                let sc = space.star.mul_vec(c);
                let row: Vec<R::Elem> = c
                    .iter()
                    .zip(&sc)
                    .map(|(a, b)| r.mul(&r.add(a, &r.mul(&sg, b)), &half))
                    .collect();
                img.push_row(&row);
            }
            let s = Subspace::from_rows_lossy(&img, space.precision_loss);
            space.precision_loss = space.precision_loss.max(s.precision_loss());
            if s.dim() != sdim {
                return Err(Error::Consistency(format!(
                    "star eigenspace ({sign}) of dimension {}, expected {sdim}",
                    s.dim()
                )));
            }
            if sign == 1 {
                space.plus = s;
            } else {
                space.minus = s;
            }
        }
        Ok(space)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn level(&self) -> u64 {
        self.level
    }
    pub fn weight(&self) -> u32 {
        self.weight
    }
    pub fn dim(&self) -> usize {
        self.basis_raw.len()
    }
    pub fn num_generators(&self) -> usize {
        self.raw_to_free.len()
    }
    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }
    pub fn cuspidal_dim(&self) -> usize {
        self.cuspidal.dim()
    }
    pub fn plus_dim(&self) -> usize {
        self.plus.dim()
    }
    /// Digits of `p`-adic precision consumed by saturation so far.
    pub fn precision_loss(&self) -> u32 {
        self.precision_loss
    }
    pub fn boundary(&self) -> &Matrix<R> {
        &self.boundary
    }

    pub fn subspace(&self, tag: SubspaceTag) -> Subspace<R> {
        match tag {
            SubspaceTag::Full => Subspace::full(self.ring.clone(), self.dim()),
            SubspaceTag::Cuspidal => self.cuspidal.clone(),
            SubspaceTag::CuspidalPlus => self.plus.clone(),
            SubspaceTag::CuspidalMinus => self.minus.clone(),
        }
    }

    /// Basis Manin symbol `b` as `(point, i)`.
    pub fn basis_symbol(&self, b: usize) -> (usize, usize) {
        let w = self.weight as usize - 1;
        (self.basis_raw[b] / w, self.basis_raw[b] % w)
    }

    /// Coordinates of a combination of raw Manin symbols given on free generators.
    fn free_to_coords(&self, acc: &[R::Elem]) -> Vec<R::Elem> {
        let r = &self.ring;
        let mut out = vec![r.zero(); self.dim()];
        for (f, x) in acc.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            match self.free_coord[f] {
                FreeCoord::Basis(b) => r.add_assign(&mut out[b], x),
                FreeCoord::Combo(ri) => {
                    for (o, y) in out.iter_mut().zip(self.combos.row(ri)) {
                        r.mul_add_assign(o, x, y);
                    }
                }
            }
        }
        out
    }

    fn accumulate(&self, acc: &mut [R::Elem], pt: usize, coeffs: &[R::Elem], scale: &R::Elem) {
        let r = &self.ring;
        let w1 = self.weight as usize - 1;
        for (i, c) in coeffs.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            if let Some((f, neg)) = self.raw_to_free[pt * w1 + i] {
                let t = r.mul(c, scale);
                if neg {
                    acc[f] = r.sub(&acc[f], &t);
                } else {
                    r.add_assign(&mut acc[f], &t);
                }
            }
        }
    }

    /// Coordinates of the raw Manin symbol `[coeffs, (c:d)]`.
    pub fn symbol_coords(&self, coeffs: &[R::Elem], c: i64, d: i64) -> Result<Vec<R::Elem>> {
        let pt = self
            .p1
            .index(c, d)
            .ok_or_else(|| Error::Parameter(format!("({c}:{d}) is not in P1")))?;
        let mut acc = vec![self.ring.zero(); self.free_coord.len()];
        self.accumulate(&mut acc, pt, coeffs, &self.ring.one());
        Ok(self.free_to_coords(&acc))
    }

    /// Column-convention matrix of `x ↦ Σ_h x · h` on the full space.
    pub fn act_on_basis(&self, mats: &[[i64; 4]]) -> Matrix<R> {
        let r = &self.ring;
        let w = self.weight as usize - 2;
        let acts: Vec<_> = mats.iter().map(|&m| poly_action(r, w, m)).collect();
        let one = r.one();
        let mut out = Matrix::zeros(r.clone(), self.dim(), self.dim());
        let mut acc = vec![r.zero(); self.free_coord.len()];
        for b in 0..self.dim() {
            acc.iter_mut().for_each(|x| *x = r.zero());
            let (pt, i) = self.basis_symbol(b);
            let [_, _, c, d] = self.p1.lift(pt);
            for (m, act) in mats.iter().zip(&acts) {
                let [ha, hb, hc, hd] = *m;
                let Some(npt) = self.p1.index(c * ha + d * hc, c * hb + d * hd) else {
                    continue;
                };
                self.accumulate(&mut acc, npt, &act[i], &one);
            }
            let col = self.free_to_coords(&acc);
            for (row, x) in col.into_iter().enumerate() {
                out.set(row, b, x);
            }
        }
        out
    }

    /// `T_q` on the full space, for a prime `q ≠ ℓ`.
    pub fn hecke_matrix(&self, q: u64) -> Result<Matrix<R>> {
        if q == self.level {
            return Err(Error::Parameter(format!(
                "T_{q} at the level is not part of the algebra; use the Atkin-Lehner operator"
            )));
        }
        if !is_prime(q) {
            return Err(Error::Parameter(format!("{q} is not prime")));
        }
        Ok(self.act_on_basis(&merel(q as i64)))
    }

    /// Value of the boundary symbol `[Q, u/v]` at the cusp classes `(∞, 0)`.
    fn boundary_value(&self, q: &[R::Elem], u: i64, v: i64) -> [R::Elem; 2] {
        let r = &self.ring;
        let w = q.len() - 1;
        let l = self.level as i64;
        let (u, v) = if v < 0 || (v == 0 && u < 0) {
            (-u, -v)
        } else {
            (u, v)
        };
        if v.rem_euclid(l) == 0 {
            // γ = (x y; -v u) sends u/v to ∞.
            let (_, x, y) = ext_gcd(u, v);
            let gq = act_poly(r, q, adj([x, y, -v, u]));
            [gq[w].clone(), r.zero()]
        } else {
            // γ = (v -u; ℓc' d') sends u/v to 0, then S = (0 -1; 1 0) moves 0 to ∞.
            let (_, dp, cp) = ext_gcd(v, u * l);
            let gq = act_poly(r, q, adj([v, -u, l * cp, dp]));
            let sq = act_poly(r, &gq, adj(SIGMA));
            [r.zero(), sq[w].clone()]
        }
    }

    fn boundary_matrix(&self) -> Matrix<R> {
        let r = &self.ring;
        let w = self.weight as usize - 2;
        let mut out = Matrix::zeros(r.clone(), self.dim(), 2);
        for b in 0..self.dim() {
            let (pt, i) = self.basis_symbol(b);
            let g = self.p1.lift(pt);
            let [a, bb, c, d] = g;
            let mut mono = vec![r.zero(); w + 1];
            mono[i] = r.one();
            let gp = act_poly(r, &mono, adj(g));
            // [P, g] = (gP){b/d, a/c}, with boundary (gP){a/c} - (gP){b/d}.
            let hi = self.boundary_value(&gp, a, c);
            let lo = self.boundary_value(&gp, bb, d);
            for j in 0..2 {
                out.set(b, j, r.sub(&hi[j], &lo[j]));
            }
        }
        out
    }

    /// Add `Q{0, u/v}` to `acc` via the continued fraction convergents of `u/v`.
    fn add_zero_to(&self, acc: &mut [R::Elem], q: &[R::Elem], u: i64, v: i64, scale: &R::Elem) {
        let (u, v) = if v < 0 || (v == 0 && u < 0) {
            (-u, -v)
        } else {
            (u, v)
        };
        // {0, ∞}
        let pt = self.p1.index(0, 1).unwrap();
        self.accumulate(acc, pt, q, scale);
        if v == 0 {
            return;
        }
        let r = &self.ring;
        let (mut pm2, mut qm2, mut pm1, mut qm1) = (0i64, 1i64, 1i64, 0i64);
        let (mut num, mut den) = (u, v);
        let mut j = 0u32;
        loop {
            let a = num.div_euclid(den);
            let (pj, qj) = (a * pm1 + pm2, a * qm1 + qm2);
            // g_j = (p_j, ±p_{j-1}; q_j, ±q_{j-1}) with sign (-1)^(j-1).
            let s = if j % 2 == 0 { -1 } else { 1 };
            let g = [pj, s * pm1, qj, s * qm1];
            let qg = act_poly(r, q, g);
            if let Some(pt) = self.p1.index(qj, s * qm1) {
                self.accumulate(acc, pt, &qg, scale);
            }
            let rem = num - a * den;
            if rem == 0 {
                break;
            }
            (num, den) = (den, rem);
            (pm2, qm2, pm1, qm1) = (pm1, qm1, pj, qj);
            j += 1;
        }
    }

    /// The Atkin–Lehner involution `W / ℓ^(k/2 - 1)` with `W = (0 -1; ℓ 0)`.
    pub fn atkin_lehner_matrix(&self) -> Matrix<R> {
        let r = &self.ring;
        let l = self.level as i64;
        let w = self.weight as usize - 2;
        let norm = r.pow(&r.from_i64(l), (self.weight / 2 - 1) as u64);
        let scale = r.inv(&norm).expect("level is a unit");
        let neg_scale = r.neg(&scale);
        let mut out = Matrix::zeros(r.clone(), self.dim(), self.dim());
        let mut acc = vec![r.zero(); self.free_coord.len()];
        for b in 0..self.dim() {
            acc.iter_mut().for_each(|x| *x = r.zero());
            let (pt, i) = self.basis_symbol(b);
            let [a, bb, c, d] = self.p1.lift(pt);
            let wg = [-c, -d, l * a, l * bb];
            let mut mono = vec![r.zero(); w + 1];
            mono[i] = r.one();
            let q = act_poly(r, &mono, adj(wg));
            // W[P, g] = Q{Wg·0, Wg·∞} = Q{0, Wg·∞} - Q{0, Wg·0}.
            self.add_zero_to(&mut acc, &q, wg[0], wg[2], &scale);
            self.add_zero_to(&mut acc, &q, wg[1], wg[3], &neg_scale);
            let col = self.free_to_coords(&acc);
            for (row, x) in col.into_iter().enumerate() {
                out.set(row, b, x);
            }
        }
        out
    }

    pub fn star_matrix(&self) -> &Matrix<R> {
        &self.star
    }

    pub fn restrict_to(&self, op: &Matrix<R>, tag: SubspaceTag) -> Result<Matrix<R>> {
        match tag {
            SubspaceTag::Full => Ok(op.clone()),
            _ => restrict_lossy(op, &self.subspace(tag), self.precision_loss),
        }
    }

    pub fn hecke_operator(&self, q: u64, tag: SubspaceTag) -> Result<OperatorMatrix<R>> {
        let m = self.hecke_matrix(q)?;
        Ok(OperatorMatrix {
            name: OperatorName::Hecke(q),
            subspace: tag,
            matrix: self.restrict_to(&m, tag)?,
        })
    }

    pub fn atkin_lehner(&self, tag: SubspaceTag) -> Result<OperatorMatrix<R>> {
        let m = self.atkin_lehner_matrix();
        Ok(OperatorMatrix {
            name: OperatorName::AtkinLehner,
            subspace: tag,
            matrix: self.restrict_to(&m, tag)?,
        })
    }

    pub fn star_involution(&self, tag: SubspaceTag) -> Result<OperatorMatrix<R>> {
        Ok(OperatorMatrix {
            name: OperatorName::Star,
            subspace: tag,
            matrix: self.restrict_to(&self.star, tag)?,
        })
    }

    /// Whether `T_q - (1 + q^(k-1))` and `w + 1` share a kernel vector on the full space.
    pub fn has_eisenstein_vector(&self, q: u64) -> Result<bool> {
        let r = &self.ring;
        let t = self.hecke_matrix(q)?;
        let ev = r.add(
            &r.one(),
            &r.pow(&r.from_i64(q as i64), self.weight as u64 - 1),
        );
        let stacked = t
            .shift(&ev)
            .vstack(&self.atkin_lehner_matrix().shift(&r.from_i64(-1)));
        Ok(row_reduce(&stacked).rank() < self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PadicTruncation, Rationals};

    #[test]
    fn cusp_form_dimensions() {
        // Classical values: dim S_2 = genus of X_0(ℓ).
        assert_eq!(dim_cusp_forms(11, 2), 1);
        assert_eq!(dim_cusp_forms(11, 4), 2);
        assert_eq!(dim_cusp_forms(29, 2), 2);
        assert_eq!(dim_cusp_forms(37, 2), 2);
        assert_eq!(dim_cusp_forms(2, 8), 1);
        assert_eq!(dim_cusp_forms(13, 2), 0);
        assert_eq!(dim_cusp_forms(11, 12), 10);
    }

    #[test]
    fn level_eleven_weight_two() {
        let s = ManinSymbolSpace::build(Rationals, 11, 2, DEFAULT_RESOURCE_BOUND).unwrap();
        assert_eq!(s.num_generators(), 12);
        assert_eq!((s.dim(), s.cuspidal_dim(), s.plus_dim()), (3, 2, 1));
        let t2 = s
            .hecke_operator(2, SubspaceTag::CuspidalPlus)
            .unwrap()
            .matrix;
        assert_eq!(t2, Matrix::from_i64(Rationals, &[&[-2]]));
        let w = s.atkin_lehner(SubspaceTag::CuspidalPlus).unwrap().matrix;
        assert_eq!(w, Matrix::from_i64(Rationals, &[&[-1]]));
        for (q, a) in [(3, -1), (5, 1), (7, -2)] {
            let t = s
                .hecke_operator(q, SubspaceTag::CuspidalPlus)
                .unwrap()
                .matrix;
            assert_eq!(t, Matrix::from_i64(Rationals, &[&[a]]), "a_{q}");
        }
        assert!(s.has_eisenstein_vector(2).unwrap());
    }

    #[test]
    fn level_eleven_weight_four() {
        let s = ManinSymbolSpace::build(Rationals, 11, 4, DEFAULT_RESOURCE_BOUND).unwrap();
        assert_eq!(s.num_generators(), 36);
        assert_eq!((s.dim(), s.cuspidal_dim()), (6, 4));
        let w = s.atkin_lehner_matrix();
        assert!(w.mul(&w).is_identity());
        let t2 = s.hecke_matrix(2).unwrap();
        let t3 = s.hecke_matrix(3).unwrap();
        assert!(t2.commutes_with(&t3));
        assert!(t2.commutes_with(&w));
        assert!(t2.commutes_with(s.star_matrix()));
        assert!(s.star_matrix().mul(s.star_matrix()).is_identity());
        assert!(s.has_eisenstein_vector(2).unwrap());
    }

    #[test]
    fn boundary_kills_cuspidal_subspace() {
        let s = ManinSymbolSpace::build(Rationals, 13, 6, DEFAULT_RESOURCE_BOUND).unwrap();
        let c = s.subspace(SubspaceTag::Cuspidal);
        let img = c.basis().mul(s.boundary());
        assert!(img.is_zero());
    }

    #[test]
    fn padic_space_matches_rational_dimensions() {
        let r = PadicTruncation::new(5, 12).unwrap();
        let s = ManinSymbolSpace::build(r, 31, 6, DEFAULT_RESOURCE_BOUND).unwrap();
        assert_eq!(s.cuspidal_dim(), 2 * dim_cusp_forms(31, 6));
        let w = s.atkin_lehner_matrix();
        assert!(w.mul(&w).is_identity());
    }

    #[test]
    fn guards() {
        assert!(matches!(
            ManinSymbolSpace::build(Rationals, 11, 3, 6000),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            ManinSymbolSpace::build(Rationals, 997, 10, 6000),
            Err(Error::ResourceBound { .. })
        ));
        let s = ManinSymbolSpace::build(Rationals, 11, 2, 6000).unwrap();
        assert!(s.hecke_matrix(11).is_err());
    }
}
