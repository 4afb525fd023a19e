//! Hermite, Howell and Smith normal forms over a principal ideal ring.

use super::Matrix;
use crate::ring::{Pir, Ring};

fn combine_rows<R: Pir>(r: &R, rows: &mut [Vec<R::Elem>], a: usize, b: usize, c: usize) {
    let (x, y) = (&rows[a][c], &rows[b][c]);
    if let Some(q) = r.div_exact(y, x) {
        let nq = r.neg(&q);
        let (ra, rb) = pair_mut(rows, a, b);
        for (t, s) in rb.iter_mut().zip(ra.iter()) {
            r.mul_add_assign(t, &nq, s);
        }
        return;
    }
    let (_, s, t, u, v) = r.xgcd(x, y);
    let (ra, rb) = pair_mut(rows, a, b);
    for (ea, eb) in ra.iter_mut().zip(rb.iter_mut()) {
        let na = r.add(&r.mul(&s, ea), &r.mul(&t, eb));
        let nb = r.add(&r.mul(&u, ea), &r.mul(&v, eb));
        *ea = na;
        *eb = nb;
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

fn echelon<R: Pir>(m: &Matrix<R>, howell: bool) -> Matrix<R> {
    let r = m.ring().clone();
    let cols = m.cols();
    let mut rows = m.row_vecs();
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        // Least pivot first keeps integer entries small.
        let mut best: Option<usize> = None;
        for i in top..rows.len() {
            let x = &rows[i][c];
            if r.is_zero(x) {
                continue;
            }
            if best.map_or(true, |b| r.smaller_pivot(x, &rows[b][c])) {
                best = Some(i);
            }
        }
        let Some(b) = best else { continue };
        rows.swap(top, b);
        for i in top + 1..rows.len() {
            if !r.is_zero(&rows[i][c]) {
                combine_rows(&r, &mut rows, top, i, c);
            }
        }
        let u = r.canonical_unit(&rows[top][c]);
        if !r.is_one(&u) {
            for x in rows[top].iter_mut() {
                *x = r.mul(x, &u);
            }
        }
        let piv = rows[top][c].clone();
        for i in 0..top {
            let x = &rows[i][c];
            let rem = r.reduce_mod(x, &piv);
            if rem != *x {
                let q = r
                    .div_exact(&r.sub(x, &rem), &piv)
                    .expect("remainder is exact");
                let nq = r.neg(&q);
                let (ri, rt) = pair_mut(&mut rows, i, top);
                for (t, s) in ri.iter_mut().zip(rt.iter()) {
                    r.mul_add_assign(t, &nq, s);
                }
            }
        }
        if howell {
            if let Some(a) = r.annihilator(&piv) {
                let extra: Vec<R::Elem> = rows[top].iter().map(|x| r.mul(&a, x)).collect();
                if extra.iter().any(|x| !r.is_zero(x)) {
                    rows.push(extra);
                }
            }
        }
        top += 1;
    }
    rows.truncate(top);
    let mut out = Matrix::empty(r, cols);
    for row in rows {
        out.push_row(&row);
    }
    out
}

/// Row Hermite normal form: nonzero rows only, canonical pivots, entries
/// above each pivot reduced. Its rows span the row module of `m`.
pub fn hnf<R: Pir>(m: &Matrix<R>) -> Matrix<R> {
    echelon(m, false)
}

/// Howell form: a Hermite form closed under annihilators of its pivots, so
/// that membership can be decided by reduction even with zero divisors.
pub fn howell_form<R: Pir>(m: &Matrix<R>) -> Matrix<R> {
    echelon(m, true)
}

/// Reduce `v` against a Hermite or Howell form; zero iff `v` is in the span.
pub fn reduce_against<R: Pir>(h: &Matrix<R>, v: &[R::Elem]) -> Vec<R::Elem> {
    reduce_with_coords(h, v).0
}

/// As [`reduce_against`], also returning the coefficients consumed per row.
pub fn reduce_with_coords<R: Pir>(h: &Matrix<R>, v: &[R::Elem]) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let r = h.ring();
    let mut v = v.to_vec();
    let mut coords = vec![r.zero(); h.rows()];
    let mut c = 0;
    for i in 0..h.rows() {
        while r.is_zero(h.get(i, c)) {
            c += 1;
        }
        let piv = h.get(i, c);
        let x = &v[c];
        if r.is_zero(x) {
            continue;
        }
        let rem = r.reduce_mod(x, piv);
        let Some(q) = r.div_exact(&r.sub(x, &rem), piv) else {
            continue;
        };
        let nq = r.neg(&q);
        for (t, s) in v.iter_mut().zip(h.row(i)) {
            r.mul_add_assign(t, &nq, s);
        }
        coords[i] = q;
    }
    (v, coords)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmithNormalFormResult<E> {
    /// The `min(rows, cols)` diagonal entries `d₁ | d₂ | …`, zeros last.
    pub invariant_factors: Vec<E>,
}

/// Smith form with transforms: `u * m * v` is diagonal with entries `d`.
#[derive(Clone, Debug)]
pub struct SmithForm<R: Ring> {
    pub d: Vec<R::Elem>,
    pub u: Matrix<R>,
    pub v: Matrix<R>,
}

pub fn snf<R: Pir>(m: &Matrix<R>) -> SmithNormalFormResult<R::Elem> {
    SmithNormalFormResult {
        invariant_factors: smith(m, false).d,
    }
}

pub fn snf_with_transforms<R: Pir>(m: &Matrix<R>) -> SmithForm<R> {
    smith(m, true)
}

fn smith<R: Pir>(m: &Matrix<R>, track: bool) -> SmithForm<R> {
    let r = m.ring().clone();
    let (nr, nc) = (m.rows(), m.cols());
    let mut a = m.row_vecs();
    // Transforms are stored so that row operations apply to `u` rows and
    // column operations to `vt` rows (v transposed).
    let mut u = if track {
        Matrix::identity(r.clone(), nr).row_vecs()
    } else {
        vec![]
    };
    let mut vt = if track {
        Matrix::identity(r.clone(), nc).row_vecs()
    } else {
        vec![]
    };
    let mut d = Vec::with_capacity(nr.min(nc));

    for t in 0..nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                let x = &a[i][j];
                if !r.is_zero(x) && best.map_or(true, |(bi, bj)| r.smaller_pivot(x, &a[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            d.extend((t..nr.min(nc)).map(|_| r.zero()));
            break;
        };
        a.swap(t, bi);
        if track {
            u.swap(t, bi);
        }
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            if track {
                vt.swap(t, bj);
            }
        }
        loop {
            for i in t + 1..nr {
                if !r.is_zero(&a[i][t]) {
                    row_step(&r, &mut a, track.then_some(&mut u), t, i, t);
                }
            }
            let mut dirty = false;
            for j in t + 1..nc {
                if !r.is_zero(&a[t][j]) {
                    col_step(&r, &mut a, track.then_some(&mut vt), t, j, t);
                    dirty = true;
                }
            }
            if dirty && (t + 1..nr).any(|i| !r.is_zero(&a[i][t])) {
                continue;
            }
            // Divisibility: fold in any row with an entry the pivot misses.
            let piv = a[t][t].clone();
            let bad =
                (t + 1..nr).find(|&i| (t + 1..nc).any(|j| r.div_exact(&a[i][j], &piv).is_none()));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&ri) {
                        r.add_assign(x, y);
                    }
                    if track {
                        let ui = u[i].clone();
                        for (x, y) in u[t].iter_mut().zip(&ui) {
                            r.add_assign(x, y);
                        }
                    }
                }
                None => break,
            }
        }
        let cu = r.canonical_unit(&a[t][t]);
        if !r.is_one(&cu) {
            a[t][t] = r.mul(&a[t][t], &cu);
            if track {
                for x in u[t].iter_mut() {
                    *x = r.mul(x, &cu);
                }
            }
        }
        d.push(a[t][t].clone());
    }
    let (u, v) = if track {
        (
            Matrix::from_rows(r.clone(), u).unwrap_or_else(|_| Matrix::zeros(r.clone(), 0, 0)),
            Matrix::from_rows(r.clone(), vt)
                .unwrap_or_else(|_| Matrix::zeros(r.clone(), 0, 0))
                .transpose(),
        )
    } else {
        (
            Matrix::zeros(r.clone(), 0, 0),
            Matrix::zeros(r.clone(), 0, 0),
        )
    };
    let u = if track && nr == 0 {
        Matrix::identity(r.clone(), 0)
    } else {
        u
    };
    let v = if track && nc == 0 {
        Matrix::identity(r, 0)
    } else {
        v
    };
    SmithForm { d, u, v }
}

/// Row operation zeroing `a[i][c]` against pivot row `t`, mirrored on `u`.
fn row_step<R: Pir>(
    r: &R,
    a: &mut [Vec<R::Elem>],
    u: Option<&mut Vec<Vec<R::Elem>>>,
    t: usize,
    i: usize,
    c: usize,
) {
    let (x, y) = (a[t][c].clone(), a[i][c].clone());
    let coeffs = match r.div_exact(&y, &x) {
        Some(q) => (r.one(), r.zero(), r.neg(&q), r.one()),
        None => {
            let (_, s, tt, uu, vv) = r.xgcd(&x, &y);
            (s, tt, uu, vv)
        }
    };
    apply_pair(r, a, t, i, &coeffs);
    if let Some(u) = u {
        apply_pair(r, u, t, i, &coeffs);
    }
}

/// Column analogue of [`row_step`]; `vt` holds the transposed column transform.
fn col_step<R: Pir>(
    r: &R,
    a: &mut [Vec<R::Elem>],
    vt: Option<&mut Vec<Vec<R::Elem>>>,
    t: usize,
    j: usize,
    c: usize,
) {
    let (x, y) = (a[c][t].clone(), a[c][j].clone());
    let coeffs = match r.div_exact(&y, &x) {
        Some(q) => (r.one(), r.zero(), r.neg(&q), r.one()),
        None => {
            let (_, s, tt, uu, vv) = r.xgcd(&x, &y);
            (s, tt, uu, vv)
        }
    };
    let (s, tt, uu, vv) = &coeffs;
    for row in a.iter_mut() {
        let (ea, eb) = (row[t].clone(), row[j].clone());
        row[t] = r.add(&r.mul(s, &ea), &r.mul(tt, &eb));
        row[j] = r.add(&r.mul(uu, &ea), &r.mul(vv, &eb));
    }
    if let Some(vt) = vt {
        apply_pair(r, vt, t, j, &coeffs);
    }
}

fn apply_pair<R: Pir>(
    r: &R,
    rows: &mut [Vec<R::Elem>],
    a: usize,
    b: usize,
    (s, t, u, v): &(R::Elem, R::Elem, R::Elem, R::Elem),
) {
    let (ra, rb) = pair_mut(rows, a, b);
    for (ea, eb) in ra.iter_mut().zip(rb.iter_mut()) {
        let na = r.add(&r.mul(s, ea), &r.mul(t, eb));
        let nb = r.add(&r.mul(u, ea), &r.mul(v, eb));
        *ea = na;
        *eb = nb;
    }
}
