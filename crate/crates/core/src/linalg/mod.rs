//! Dense matrices over a [`Ring`] and the algorithms built on them.

mod charpoly;
mod closure;
mod echelon;
mod lattice;
mod normal_form;

pub use charpoly::charpoly;
pub use closure::{algebra_closure, AlgebraClosure};
pub use lattice::{log_colength, LatticeBuilder};
pub use echelon::{
    common_generalized_kernel, generalized_kernel, kernel, kernel_fp, kernel_lossy, restrict,
    restrict_lossy, row_reduce, row_reduce_lossy, rref_fp, RowReduced, Subspace,
};
pub use normal_form::{
    hnf, howell_form, reduce_against, reduce_with_coords, snf, snf_with_transforms, SmithForm,
    SmithNormalFormResult,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{LocalRing, Ring, RingTag};

impl<R: LocalRing> Matrix<R> {
    /// Equality up to the last `loss` digits over ℤ/p^N; exact equality otherwise.
    pub fn agrees_with(&self, other: &Self, loss: u32) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        match self.ring.digits() {
            None => self == other,
            Some(n) => {
                let reliable = n.saturating_sub(loss);
                self.data
                    .iter()
                    .zip(&other.data)
                    .all(|(a, b)| self.ring.precision_cost(&self.ring.sub(a, b)) >= reliable)
            }
        }
    }

    pub fn commutes_with_lossy(&self, other: &Self, loss: u32) -> bool {
        self.mul(other).agrees_with(&other.mul(self), loss)
    }
}

/// Row-major dense matrix. Entries are plain values interpreted through `ring`.
#[derive(Clone, Debug)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for Matrix<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<R: Ring> Matrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            ring,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        let data = vec![ring.zero(); rows * cols];
        Self {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.ring.one();
        }
        m
    }

    pub fn from_rows(ring: R, rows: Vec<Vec<R::Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            ring,
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(ring: R, rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<R::Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
            .collect();
        Self::from_rows(ring, data).expect("ragged rows")
    }

    /// Zero matrix with `cols` columns and no rows; a useful seed for [`Matrix::push_row`].
    pub fn empty(ring: R, cols: usize) -> Self {
        Self {
            ring,
            rows: 0,
            cols,
            data: vec![],
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[R::Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [R::Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<R::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn push_row(&mut self, row: &[R::Elem]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let r = &self.ring;
        let mut out = Self::zeros(r.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if r.is_zero(a) {
                    continue;
                }
                for (x, b) in acc.iter_mut().zip(other.row(k)) {
                    r.mul_add_assign(x, a, b);
                }
            }
        }
        out
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    r.mul_add_assign(&mut acc, a, b);
                }
                acc
            })
            .collect()
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        let r = &self.ring;
        let mut acc = vec![r.zero(); self.cols];
        for (a, row) in v.iter().zip(self.data.chunks(self.cols.max(1))) {
            if r.is_zero(a) {
                continue;
            }
            for (x, b) in acc.iter_mut().zip(row) {
                r.mul_add_assign(x, a, b);
            }
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(&self.ring, a, b))
            .collect();
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map(|r, a| r.mul(c, a))
    }

    pub fn neg(&self) -> Self {
        self.map(|r, a| r.neg(a))
    }

    /// `self - c I`
    pub fn shift(&self, c: &R::Elem) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let d = self.ring.sub(m.get(i, i), c);
            m.set(i, i, d);
        }
        m
    }

    pub fn map(&self, f: impl Fn(&R, &R::Elem) -> R::Elem) -> Self {
        let data = self.data.iter().map(|a| f(&self.ring, a)).collect();
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Entrywise change of ring.
    pub fn convert<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.ring.clone(), self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.ring.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.ring.clone(), self.rows)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            ring: self.ring.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack width");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            ring: self.ring.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack height");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Self {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Flatten to a single row, for treating matrices as module elements.
    pub fn flatten(&self) -> Vec<R::Elem> {
        self.data.clone()
    }

    pub fn to_dump(&self) -> MatrixDump {
        MatrixDump {
            rows: self.rows,
            cols: self.cols,
            ring: self.ring.tag(),
            entries: self.data.iter().map(|a| self.ring.to_decimal(a)).collect(),
        }
    }

    pub fn from_dump(ring: R, dump: &MatrixDump) -> Result<Self> {
        if dump.ring != ring.tag() {
            return Err(Error::Dump(format!(
                "ring {:?} but expected {:?}",
                dump.ring,
                ring.tag()
            )));
        }
        let data = dump
            .entries
            .iter()
            .map(|s| {
                ring.parse_decimal(s)
                    .ok_or_else(|| Error::Dump(format!("bad entry {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, dump.rows, dump.cols, data).map_err(|e| Error::Dump(e.to_string()))
    }
}

/// The debug JSON format shared with the command line `--dump` flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub ring: RingTag,
    pub entries: Vec<String>,
}
