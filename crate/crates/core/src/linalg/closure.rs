//! Subalgebras of a matrix ring generated by commuting matrices.

use super::normal_form::{hnf, reduce_with_coords};
use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::Pir;

#[derive(Clone, Debug)]
pub struct AlgebraClosure<R: Pir> {
    /// Module basis in Hermite coordinates of the flattened matrices.
    pub basis: Vec<Matrix<R>>,
    /// `mult_table[i][j]` expresses `basis[i] * basis[j]` in the basis.
    pub mult_table: Vec<Vec<Vec<R::Elem>>>,
}

impl<R: Pir> AlgebraClosure<R> {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `m` in the basis, if `m` lies in the algebra.
    pub fn coordinates(&self, m: &Matrix<R>) -> Option<Vec<R::Elem>> {
        let r = m.ring().clone();
        let n = m.flatten().len();
        let mut h = Matrix::empty(r.clone(), n);
        for b in &self.basis {
            h.push_row(&b.flatten());
        }
        let (rest, coords) = reduce_with_coords(&h, &m.flatten());
        rest.iter().all(|x| r.is_zero(x)).then_some(coords)
    }
}

/// The smallest multiplicatively closed module containing 1 and `generators`.
///
/// Because the generators commute, closing the span of `1` under right
/// multiplication by each generator already yields every monomial.
pub fn algebra_closure<R: Pir>(generators: &[Matrix<R>]) -> Result<AlgebraClosure<R>> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Dimension("no generators".into()))?;
    let ring = first.ring().clone();
    let n = first.rows();
    for g in generators {
        if !g.is_square() || g.rows() != n {
            return Err(Error::Dimension(
                "generators must be square of equal size".into(),
            ));
        }
    }
    for (i, a) in generators.iter().enumerate() {
        for (j, b) in generators.iter().enumerate().skip(i + 1) {
            if !a.commutes_with(b) {
                return Err(Error::CommutativityViolation(format!(
                    "generators {i} and {j}"
                )));
            }
        }
    }

    let unflatten = |row: &[R::Elem]| Matrix::new(ring.clone(), n, n, row.to_vec()).unwrap();
    let mut span = Matrix::empty(ring.clone(), n * n);
    span.push_row(&Matrix::identity(ring.clone(), n).flatten());
    for g in generators {
        span.push_row(&g.flatten());
    }
    let mut h = hnf(&span);
    loop {
        let mut grown = h.clone();
        for i in 0..h.rows() {
            let b = unflatten(h.row(i));
            for g in generators {
                grown.push_row(&b.mul(g).flatten());
            }
        }
        let next = hnf(&grown);
        if next == h {
            break;
        }
        h = next;
    }

    let basis: Vec<Matrix<R>> = (0..h.rows()).map(|i| unflatten(h.row(i))).collect();
    let mut mult_table = Vec::with_capacity(basis.len());
    for a in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for b in &basis {
            let (rest, coords) = reduce_with_coords(&h, &a.mul(b).flatten());
            if rest.iter().any(|x| !ring.is_zero(x)) {
                return Err(Error::Consistency(
                    "closure is not multiplicatively closed".into(),
                ));
            }
            row.push(coords);
        }
        mult_table.push(row);
    }
    Ok(AlgebraClosure { basis, mult_table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;

    #[test]
    fn identity_generates_rank_one() {
        let a = algebra_closure(&[Matrix::identity(Integers, 3)]).unwrap();
        assert_eq!(a.rank(), 1);
        assert!(a.basis[0].is_identity());
    }

    #[test]
    fn involution_generates_rank_two() {
        let g = Matrix::from_i64(Integers, &[&[1, 0], &[0, -1]]);
        let a = algebra_closure(&[g.clone()]).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(a.coordinates(&g.mul(&g)).is_some());
    }

    #[test]
    fn irreducible_quadratic_generates_rank_two() {
        // x^2 + x + 1: companion matrix.
        let g = Matrix::from_i64(Integers, &[&[0, -1], &[1, -1]]);
        let a = algebra_closure(&[g]).unwrap();
        assert_eq!(a.rank(), 2);
        let z = Integers;
        for (i, row) in a.mult_table.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let mut acc = Matrix::zeros(z, 2, 2);
                for (k, ck) in c.iter().enumerate() {
                    acc = acc.add(&a.basis[k].scale(ck));
                }
                assert_eq!(acc, a.basis[i].mul(&a.basis[j]));
            }
        }
    }

    #[test]
    fn index_two_order_is_found() {
        // g^2 = 1 and (1 + g)/2 is an integral matrix outside the span of 1 and g.
        let g = Matrix::from_i64(Integers, &[&[1, 2], &[0, -1]]);
        let a = algebra_closure(&[g]).unwrap();
        assert_eq!(a.rank(), 2);
        let half = Matrix::from_i64(Integers, &[&[1, 1], &[0, 0]]);
        assert!(a.coordinates(&half).is_none());
    }

    #[test]
    fn non_commuting_generators_rejected() {
        let a = Matrix::from_i64(Integers, &[&[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(Integers, &[&[0, 0], &[1, 0]]);
        assert!(matches!(
            algebra_closure(&[a, b]),
            Err(Error::CommutativityViolation(_))
        ));
    }
}
