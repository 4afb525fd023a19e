//! Elimination over local rings: fields and ℤ/p^N.
//!
//! Pivots are always units. When a row has no unit entry it is divided by its
//! content first, which saturates the row space; over ℤ/p^N that costs
//! precision, recorded per row and reported as the worst case.

use super::Matrix;
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ring::{LocalRing, PrimeField, Ring};

/// A row-reduced matrix: every pivot column is a standard basis column.
#[derive(Clone, Debug)]
pub struct RowReduced<R: Ring> {
    /// Nonzero rows only, ordered by pivot column.
    pub matrix: Matrix<R>,
    pub pivots: Vec<usize>,
    /// Number of trailing `p`-adic digits that may be wrong.
    pub precision_loss: u32,
}

impl<R: Ring> RowReduced<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn content<R: LocalRing>(r: &R, row: &[R::Elem]) -> R::Elem {
    let mut g = r.zero();
    for a in row {
        if !r.is_zero(a) {
            g = r.xgcd(&g, a).0;
        }
    }
    g
}

/// Reduce `m` to a saturated row-reduced form.
pub fn row_reduce<R: LocalRing>(m: &Matrix<R>) -> RowReduced<R> {
    row_reduce_lossy(m, 0)
}

/// As [`row_reduce`], for input whose last `loss` digits are already unreliable.
///
/// Over ℤ/p^N a row whose content lies beyond the reliable digits is
/// indistinguishable from zero and is dropped.
pub fn row_reduce_lossy<R: LocalRing>(m: &Matrix<R>, loss: u32) -> RowReduced<R> {
    let r = m.ring().clone();
    let digits = r.digits();
    let cols = m.cols();
    let mut rows = m.row_vecs();
    let mut loss = vec![loss; rows.len()];
    let mut active: Vec<usize> = (0..rows.len()).collect();
    let mut done: Vec<(usize, usize)> = vec![];

    loop {
        active.retain(|&i| {
            let row = &mut rows[i];
            if row.iter().all(|a| r.is_zero(a)) {
                return false;
            }
            if !row.iter().any(|a| r.is_unit(a)) {
                let c = content(&r, row);
                let cost = r.precision_cost(&c);
                if digits.is_some_and(|n| loss[i] + cost >= n) {
                    return false;
                }
                loss[i] += cost;
                for a in row.iter_mut() {
                    *a = r.div_exact(a, &c).expect("content divides row");
                }
            }
            true
        });
        let mut best: Option<(usize, usize)> = None;
        for &i in &active {
            let limit = best.map_or(cols, |b| b.0);
            if let Some(c) = rows[i][..limit].iter().position(|a| r.is_unit(a)) {
                best = Some((c, i));
                if c == 0 {
                    break;
                }
            }
        }
        let Some((c, p)) = best else { break };
        let inv = r.inv(&rows[p][c]).unwrap();
        if !r.is_one(&inv) {
            for a in rows[p].iter_mut() {
                *a = r.mul(a, &inv);
            }
        }
        let prow = std::mem::take(&mut rows[p]);
        for j in active.iter().copied().chain(done.iter().map(|d| d.0)) {
            if j == p {
                continue;
            }
            let f = rows[j][c].clone();
            if r.is_zero(&f) {
                continue;
            }
            let nf = r.neg(&f);
            for (x, y) in rows[j].iter_mut().zip(&prow) {
                r.mul_add_assign(x, &nf, y);
            }
            loss[j] = loss[j].max(loss[p]);
        }
        rows[p] = prow;
        active.retain(|&i| i != p);
        done.push((p, c));
    }

    done.sort_by_key(|d| d.1);
    let mut out = Matrix::empty(r, cols);
    let mut pivots = Vec::with_capacity(done.len());
    let mut worst = 0;
    for (i, c) in done {
        out.push_row(&rows[i]);
        pivots.push(c);
        worst = worst.max(loss[i]);
    }
    RowReduced {
        matrix: out,
        pivots,
        precision_loss: worst,
    }
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per row.
///
/// Over ℤ/p^N this is the saturated kernel; entries are exact modulo
/// `p^(N - precision_loss)`.
pub fn kernel<R: LocalRing>(m: &Matrix<R>) -> (Matrix<R>, u32) {
    kernel_lossy(m, 0)
}

/// As [`kernel`], for input with `loss` unreliable digits.
pub fn kernel_lossy<R: LocalRing>(m: &Matrix<R>, loss: u32) -> (Matrix<R>, u32) {
    let rr = row_reduce_lossy(m, loss);
    (kernel_from_reduced(&rr), rr.precision_loss)
}

fn kernel_from_reduced<R: LocalRing>(rr: &RowReduced<R>) -> Matrix<R> {
    let r = rr.matrix.ring().clone();
    let n = rr.matrix.cols();
    let mut is_pivot = vec![false; n];
    for &c in &rr.pivots {
        is_pivot[c] = true;
    }
    let mut out = Matrix::empty(r.clone(), n);
    for j in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![r.zero(); n];
        v[j] = r.one();
        for (i, &c) in rr.pivots.iter().enumerate() {
            v[c] = r.neg(rr.matrix.get(i, j));
        }
        out.push_row(&v);
    }
    out
}

fn check_fp(m: &Matrix<PrimeField>) -> Result<()> {
    let p = m.ring().modulus();
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("modulus {p} is not prime")));
    }
    Ok(())
}

/// Reduced row echelon form over 𝔽_p, with pivot columns and rank.
pub fn rref_fp(m: &Matrix<PrimeField>) -> Result<(Matrix<PrimeField>, Vec<usize>, usize)> {
    check_fp(m)?;
    let rr = row_reduce(m);
    let rank = rr.rank();
    let mut full = rr.matrix;
    for _ in rank..m.rows() {
        let z = vec![0; m.cols()];
        full.push_row(&z);
    }
    Ok((full, rr.pivots, rank))
}

pub fn kernel_fp(m: &Matrix<PrimeField>) -> Result<Vec<Vec<u64>>> {
    check_fp(m)?;
    Ok(kernel(m).0.row_vecs())
}

/// A submodule given by a row-reduced basis.
#[derive(Clone, Debug)]
pub struct Subspace<R: Ring> {
    basis: RowReduced<R>,
}

impl<R: LocalRing> Subspace<R> {
    /// Saturated span of the rows of `m`.
    pub fn from_rows(m: &Matrix<R>) -> Self {
        Self {
            basis: row_reduce(m),
        }
    }

    /// As [`Subspace::from_rows`], for rows with `loss` unreliable digits.
    pub fn from_rows_lossy(m: &Matrix<R>, loss: u32) -> Self {
        Self {
            basis: row_reduce_lossy(m, loss),
        }
    }

    pub fn full(ring: R, n: usize) -> Self {
        let m = Matrix::identity(ring, n);
        Self {
            basis: RowReduced {
                matrix: m,
                pivots: (0..n).collect(),
                precision_loss: 0,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.matrix.cols()
    }

    pub fn basis(&self) -> &Matrix<R> {
        &self.basis.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.basis.pivots
    }

    pub fn precision_loss(&self) -> u32 {
        self.basis.precision_loss
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[R::Elem]) -> Option<Vec<R::Elem>> {
        self.coordinates_lossy(v, 0)
    }

    /// Membership up to the reliable digits of `v` and of the basis.
    pub fn coordinates_lossy(&self, v: &[R::Elem], loss: u32) -> Option<Vec<R::Elem>> {
        let r = self.basis.matrix.ring();
        let c: Vec<R::Elem> = self.basis.pivots.iter().map(|&j| v[j].clone()).collect();
        let back = self.basis.matrix.vec_mul(&c);
        let ok = match r.digits() {
            None => back == v,
            Some(n) => {
                let reliable = n.saturating_sub(loss.max(self.basis.precision_loss));
                back.iter()
                    .zip(v)
                    .all(|(a, b)| r.precision_cost(&r.sub(a, b)) >= reliable)
            }
        };
        ok.then_some(c)
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Linear combination of basis vectors.
    pub fn combine(&self, coords: &[R::Elem]) -> Vec<R::Elem> {
        self.basis.matrix.vec_mul(coords)
    }
}

/// Matrix of `op` (acting on column vectors) on an invariant subspace.
pub fn restrict<R: LocalRing>(op: &Matrix<R>, sub: &Subspace<R>) -> Result<Matrix<R>> {
    restrict_lossy(op, sub, 0)
}

/// As [`restrict`], tolerating `loss` unreliable digits in `op`.
pub fn restrict_lossy<R: LocalRing>(
    op: &Matrix<R>,
    sub: &Subspace<R>,
    loss: u32,
) -> Result<Matrix<R>> {
    let d = sub.dim();
    let mut cols = Vec::with_capacity(d);
    for i in 0..d {
        let img = op.mul_vec(sub.basis().row(i));
        let c = sub
            .coordinates_lossy(&img, loss)
            .ok_or_else(|| Error::Consistency("subspace is not invariant".into()))?;
        cols.push(c);
    }
    Ok(Matrix::from_rows(op.ring().clone(), cols)?.transpose())
}

/// Basis of `ker(M^N)` for square `M`.
pub fn generalized_kernel<R: LocalRing>(m: &Matrix<R>, n: u64) -> Result<Vec<Vec<R::Elem>>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    Ok(kernel(&m.pow(n)).0.row_vecs())
}

/// The common generalized kernel of pairwise commuting square matrices.
///
/// Each matrix is restricted to the generalized kernel of the previous ones;
/// stabilization of each kernel is checked one power beyond the dimension.
pub fn common_generalized_kernel<R: LocalRing>(
    mats: &[Matrix<R>],
    n: usize,
) -> Result<Subspace<R>> {
    let ring = match mats.first() {
        Some(m) => m.ring().clone(),
        None => return Err(Error::Dimension("no matrices".into())),
    };
    let mut sub = Subspace::full(ring, n);
    for m in mats {
        if sub.dim() == 0 {
            break;
        }
        let c = restrict(m, &sub)?;
        let d = c.rows() as u64;
        let p = c.pow(d);
        let (k, _) = kernel(&p);
        let (k1, _) = kernel(&p.mul(&c));
        if k1.rows() != k.rows() {
            return Err(Error::Consistency(
                "generalized kernel did not stabilize".into(),
            ));
        }
        let ambient = k.mul(sub.basis());
        sub = Subspace::from_rows(&ambient);
    }
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PadicTruncation, Rationals};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = fp(5);
        let (r, piv, rank) = rref_fp(&Matrix::identity(f, 2)).unwrap();
        assert!(r.is_identity() && piv == vec![0, 1] && rank == 2);
        let (r, piv, rank) = rref_fp(&Matrix::zeros(fp(7), 3, 3)).unwrap();
        assert!(r.is_zero() && piv.is_empty() && rank == 0);
        let (r, piv, rank) = rref_fp(&Matrix::from_i64(f, &[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(r, Matrix::from_i64(f, &[&[1, 2], &[0, 0]]));
        assert_eq!((piv, rank), (vec![0], 1));
        assert!(matches!(
            rref_fp(&Matrix::identity(PrimeField::new_unchecked(6), 2)),
            Err(Error::InvalidRing(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        let f = fp(5);
        assert!(kernel_fp(&Matrix::identity(f, 3)).unwrap().is_empty());
        assert_eq!(kernel_fp(&Matrix::zeros(f, 3, 3)).unwrap().len(), 3);
        let k = kernel_fp(&Matrix::from_i64(f, &[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(k, vec![vec![3, 1]]);
    }

    #[test]
    fn generalized_kernel_examples() {
        let f = fp(5);
        assert!(
            generalized_kernel(&Matrix::from_i64(f, &[&[2, 1], &[0, 3]]), 2)
                .unwrap()
                .is_empty()
        );
        let nil = Matrix::from_i64(f, &[&[0, 1], &[0, 0]]);
        assert_eq!(generalized_kernel(&nil, 2).unwrap().len(), 2);
        assert_eq!(generalized_kernel(&nil, 1).unwrap().len(), 1);
        let d = Matrix::from_i64(f, &[&[0, 0], &[0, 1]]);
        assert_eq!(generalized_kernel(&d, 2).unwrap(), vec![vec![1, 0]]);
        assert!(generalized_kernel(&Matrix::zeros(f, 2, 3), 2).is_err());
    }

    #[test]
    fn saturation_over_truncated_padics() {
        // Row space of [5, 10] saturates to [1, 2]; the kernel is (-2, 1).
        let r = PadicTruncation::new(5, 6).unwrap();
        let m = Matrix::from_i64(r, &[&[5, 10]]);
        let rr = row_reduce(&m);
        assert_eq!(rr.matrix, Matrix::from_i64(r, &[&[1, 2]]));
        assert_eq!(rr.precision_loss, 1);
        let (k, loss) = kernel(&m);
        assert_eq!(k, Matrix::from_i64(r, &[&[-2, 1]]));
        assert_eq!(loss, 1);
    }

    #[test]
    fn rational_rank_nullity() {
        let q = Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let (k, _) = kernel(&m);
        assert_eq!(k.rows(), 1);
        assert!(m.mul_vec(k.row(0)).iter().all(|x| q.is_zero(x)));
    }

    #[test]
    fn common_kernel_of_commuting_pair() {
        let f = fp(7);
        let a = Matrix::from_i64(f, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        let b = Matrix::from_i64(f, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        assert!(a.commutes_with(&b));
        let s = common_generalized_kernel(&[a.clone(), b], 3).unwrap();
        assert_eq!(s.dim(), 2);
        let s2 = common_generalized_kernel(&[a], 3).unwrap();
        assert_eq!(s2.dim(), 2);
        assert!(s.contains(&[1, 5, 0]));
        assert!(!s.contains(&[0, 0, 1]));
    }
}
