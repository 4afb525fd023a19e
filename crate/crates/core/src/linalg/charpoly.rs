//! Division-free characteristic polynomials (Berkowitz).

use super::Matrix;
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Coefficients of `det(xI - A)`, constant term first; the last entry is 1.
pub fn charpoly<R: Ring>(a: &Matrix<R>) -> Result<Vec<R::Elem>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let r = a.ring();
    let n = a.rows();
    // Highest degree first while building.
    let mut poly = vec![r.one()];
    for k in 0..n {
        // Toeplitz column: 1, -a_kk, -R C, -R A C, ..., -R A^(k-1) C.
        let mut t = Vec::with_capacity(k + 2);
        t.push(r.one());
        t.push(r.neg(a.get(k, k)));
        let mut col: Vec<R::Elem> = (0..k).map(|i| a.get(i, k).clone()).collect();
        for _ in 0..k {
            let mut dot = r.zero();
            for (j, c) in col.iter().enumerate() {
                r.mul_add_assign(&mut dot, a.get(k, j), c);
            }
            t.push(r.neg(&dot));
            let mut next = vec![r.zero(); k];
            for (i, x) in next.iter_mut().enumerate() {
                for (j, c) in col.iter().enumerate() {
                    r.mul_add_assign(x, a.get(i, j), c);
                }
            }
            col = next;
        }
        let mut next = vec![r.zero(); k + 2];
        for (i, x) in next.iter_mut().enumerate() {
            for (j, c) in poly.iter().enumerate() {
                if i >= j {
                    r.mul_add_assign(x, &t[i - j], c);
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, Ring};

    #[test]
    fn small_examples() {
        let z = Integers;
        let a = Matrix::from_i64(z, &[&[1, 2], &[3, 4]]);
        let c: Vec<i64> = charpoly(&a).unwrap().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(c, vec![-2, -5, 1]);
        let b = Matrix::from_i64(z, &[&[2, 0, 0], &[1, 3, 0], &[4, 5, 6]]);
        let c: Vec<i64> = charpoly(&b).unwrap().iter().map(|x| x.try_into().unwrap()).collect();
        // (x-2)(x-3)(x-6)
        assert_eq!(c, vec![-36, 36, -11, 1]);
        assert_eq!(charpoly(&Matrix::identity(z, 0)).unwrap(), vec![z.one()]);
    }

    #[test]
    fn cayley_hamilton() {
        let z = Integers;
        let a = Matrix::from_i64(z, &[&[0, 1, -2, 3], &[4, 0, 1, 1], &[-1, 2, 2, 0], &[3, 3, -1, 5]]);
        let c = charpoly(&a).unwrap();
        let mut acc = Matrix::zeros(z, 4, 4);
        let mut pw = Matrix::identity(z, 4);
        for coeff in &c {
            acc = acc.add(&pw.scale(coeff));
            pw = pw.mul(&a);
        }
        assert!(acc.is_zero());
    }
}
