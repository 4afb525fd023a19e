//! Incrementally grown submodules of `R^n` kept in Howell form.

use super::Matrix;
use crate::ring::Pir;

/// A submodule of `R^n` stored as one echelon row per pivot column.
///
/// Rows are closed under annihilators of their pivots, so reduction decides
/// membership even over ℤ/p^N.
#[derive(Clone, Debug)]
pub struct LatticeBuilder<R: Pir> {
    ring: R,
    rows: Vec<Option<Vec<R::Elem>>>,
}

impl<R: Pir> LatticeBuilder<R> {
    pub fn new(ring: R, n: usize) -> Self {
        Self { ring, rows: vec![None; n] }
    }

    pub fn from_rows(m: &Matrix<R>) -> Self {
        let mut b = Self::new(m.ring().clone(), m.cols());
        for i in 0..m.rows() {
            b.insert(m.row(i));
        }
        b
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.rows.iter().all(|r| r.is_some())
    }

    /// Pivot entry in column `c`, if a row has its pivot there.
    pub fn pivot(&self, c: usize) -> Option<&R::Elem> {
        self.rows[c].as_ref().map(|r| &r[c])
    }

    /// `(pivot column, row)` pairs in column order.
    pub fn echelon_rows(&self) -> impl Iterator<Item = (usize, &[R::Elem])> {
        self.rows.iter().enumerate().filter_map(|(c, r)| r.as_deref().map(|r| (c, r)))
    }

    /// Rows ordered by pivot column.
    pub fn basis(&self) -> Matrix<R> {
        let mut m = Matrix::empty(self.ring.clone(), self.rows.len());
        for r in self.rows.iter().flatten() {
            m.push_row(r);
        }
        m
    }

    /// Remainder of `v` after reduction; zero exactly when `v` lies in the module.
    pub fn reduce(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        let mut x = v.to_vec();
        self.reduce_from(&mut x, 0);
        x
    }

    /// Reduce in place starting at column `start`; returns the first column that
    /// could not be cleared.
    fn reduce_from(&self, x: &mut [R::Elem], start: usize) -> Option<usize> {
        let r = &self.ring;
        for c in start..x.len() {
            if r.is_zero(&x[c]) {
                continue;
            }
            let Some(row) = &self.rows[c] else { return Some(c) };
            let Some(q) = r.div_exact(&x[c], &row[c]) else { return Some(c) };
            let nq = r.neg(&q);
            for (t, s) in x[c..].iter_mut().zip(&row[c..]) {
                r.mul_add_assign(t, &nq, s);
            }
        }
        None
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.ring.is_zero(x))
    }

    /// Add `v` to the module. Returns whether the module grew.
    pub fn insert(&mut self, v: &[R::Elem]) -> bool {
        let r = self.ring.clone();
        let mut grew = false;
        let mut stack = vec![v.to_vec()];
        while let Some(mut x) = stack.pop() {
            let Some(c) = self.reduce_from(&mut x, 0) else { continue };
            grew = true;
            match self.rows[c].take() {
                None => {
                    self.place(c, x, &mut stack);
                }
                Some(row) => {
                    let (_, s, t, u, w) = r.xgcd(&row[c], &x[c]);
                    let mut top = Vec::with_capacity(x.len());
                    let mut rest = Vec::with_capacity(x.len());
                    for (a, b) in row.iter().zip(&x) {
                        top.push(r.add(&r.mul(&s, a), &r.mul(&t, b)));
                        rest.push(r.add(&r.mul(&u, a), &r.mul(&w, b)));
                    }
                    stack.push(rest);
                    self.place(c, top, &mut stack);
                }
            }
        }
        grew
    }

    fn place(&mut self, c: usize, mut x: Vec<R::Elem>, stack: &mut Vec<Vec<R::Elem>>) {
        let r = &self.ring;
        let u = r.canonical_unit(&x[c]);
        if !r.is_one(&u) {
            for a in x.iter_mut() {
                *a = r.mul(a, &u);
            }
        }
        if let Some(a) = r.annihilator(&x[c]) {
            let extra: Vec<R::Elem> = x.iter().map(|y| r.mul(&a, y)).collect();
            if extra.iter().any(|y| !r.is_zero(y)) {
                stack.push(extra);
            }
        }
        self.rows[c] = Some(x);
    }

    /// Sum of the `p`-adic valuations of the pivots; `None` unless every column has a pivot.
    pub fn log_index(&self, p: u64) -> Option<u32> {
        let mut s = 0;
        for c in 0..self.rows.len() {
            s += self.ring.p_valuation(self.pivot(c)?, p)?;
        }
        Some(s)
    }

    /// Coefficients `a` with `v = Σ a_c row_c`, for a module with a pivot in every column.
    ///
    /// Over ℤ/p^N each coefficient is determined modulo `p^(N - v_c)`.
    pub fn coordinates(&self, v: &[R::Elem]) -> Option<Vec<R::Elem>> {
        let r = &self.ring;
        let mut x = v.to_vec();
        let mut out = Vec::with_capacity(x.len());
        for c in 0..x.len() {
            let row = self.rows[c].as_ref()?;
            let q = r.div_exact(&x[c], &row[c])?;
            let nq = r.neg(&q);
            for (t, s) in x[c..].iter_mut().zip(&row[c..]) {
                r.mul_add_assign(t, &nq, s);
            }
            out.push(q);
        }
        Some(out)
    }
}

/// `log_p |R^n / M|` for a submodule of `(ℤ/p^N)^n` in Howell form.
pub fn log_colength<R: Pir>(b: &LatticeBuilder<R>, p: u64, n_digits: u32) -> u32 {
    let r = &b.ring;
    let mut total = 0;
    for c in 0..b.ambient_dim() {
        total += match b.pivot(c) {
            Some(x) => r.p_valuation(x, p).unwrap_or(n_digits),
            None => n_digits,
        };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, PadicTruncation, Ring};

    #[test]
    fn integer_lattice_index() {
        let z = Integers;
        let mut b = LatticeBuilder::new(z, 2);
        b.insert(&[z.from_i64(2), z.from_i64(4)]);
        b.insert(&[z.from_i64(6), z.from_i64(8)]);
        assert!(b.is_full());
        assert_eq!(b.log_index(2), Some(3));
        assert!(b.contains(&[z.from_i64(0), z.from_i64(4)]));
        assert!(!b.contains(&[z.from_i64(0), z.from_i64(2)]));
        let c = b.coordinates(&[z.from_i64(8), z.from_i64(12)]).unwrap();
        assert_eq!(b.basis().vec_mul(&c), vec![z.from_i64(8), z.from_i64(12)]);
    }

    #[test]
    fn howell_closure_over_prime_powers() {
        // Over ℤ/25, the row (5, 1) also spans (0, 5).
        let r = PadicTruncation::new(5, 2).unwrap();
        let mut b = LatticeBuilder::new(r, 2);
        b.insert(&[r.from_i64(5), r.from_i64(1)]);
        assert!(b.contains(&[r.from_i64(0), r.from_i64(5)]));
        assert!(!b.contains(&[r.from_i64(0), r.from_i64(1)]));
        assert_eq!(log_colength(&b, 5, 2), 2);
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let r = PadicTruncation::new(7, 4).unwrap();
        let vs = [[49i64, 7, 1], [7, 0, 14], [0, 343, 49], [1, 1, 1]];
        let mut a = LatticeBuilder::new(r, 3);
        let mut b = LatticeBuilder::new(r, 3);
        for v in &vs {
            a.insert(&v.map(|x| r.from_i64(x)));
        }
        for v in vs.iter().rev() {
            b.insert(&v.map(|x| r.from_i64(x)));
        }
        assert_eq!(log_colength(&a, 7, 4), log_colength(&b, 7, 4));
        for v in &vs {
            assert!(b.contains(&v.map(|x| r.from_i64(x))));
        }
    }
}
