//! Smith and Hermite forms against brute-force cokernel counts.
//!
//! For `G = ℤ^n / rowspace(A)` and any `m ≥ 1`, `|G/mG|` equals the number of
//! residues of `(ℤ/m)^n` modulo the span of the rows of `A`, which is counted
//! here by enumerating all combinations of rows mod `m`.

use std::collections::HashSet;

use eisrank::linalg::{hnf, snf};
use eisrank::{IntMatrix, Integers, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODULI: [i64; 7] = [2, 3, 4, 5, 6, 8, 9];

/// `|(ℤ/m)^n / span(rows)|` by enumeration.
fn brute_quotient_size(rows: &[Vec<i64>], n: usize, m: i64) -> u64 {
    let mut span = HashSet::new();
    let r = rows.len();
    let total = (m as usize).pow(r as u32);
    for idx in 0..total {
        let mut c = idx;
        let mut v = vec![0i64; n];
        for row in rows {
            let coef = (c % m as usize) as i64;
            c /= m as usize;
            for (x, a) in v.iter_mut().zip(row) {
                *x = (*x + coef * a).rem_euclid(m);
            }
        }
        span.insert(v);
    }
    (m as u64).pow(n as u32) / span.len() as u64
}

/// `|G/mG|` predicted by the invariant factors.
fn snf_quotient_size(factors: &[BigInt], n: usize, m: i64) -> u64 {
    let mb = BigInt::from(m);
    let mut size = (m as u64).pow((n - factors.len()) as u32);
    for d in factors {
        size *= if d.is_zero() { m as u64 } else { d.gcd(&mb).to_u64().unwrap() };
    }
    size
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let r = rng.gen_range(1..=3);
    let c = rng.gen_range(1..=3);
    (0..r).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect()
}

fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IntMatrix::from_i64(Integers, &refs)
}

fn det3(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

#[test]
fn smith_form_matches_enumerated_cokernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let z = Integers;
    for case in 0..10_000 {
        let rows = random_matrix(&mut rng);
        let n = rows[0].len();
        let f = snf(&to_matrix(&rows)).invariant_factors;
        assert_eq!(f.len(), rows.len().min(n));
        // Divisibility chain, nonnegative, zeros last.
        for w in f.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()), "case {case}: {f:?}");
        }
        assert!(f.iter().all(|d| !d.is_negative()));
        for m in MODULI {
            assert_eq!(
                snf_quotient_size(&f, n, m),
                brute_quotient_size(&rows, n, m),
                "case {case}: {rows:?} mod {m}, factors {f:?}"
            );
        }
        if rows.len() == n {
            let prod = f.iter().fold(z.one(), |a, d| a * d);
            assert_eq!(prod, BigInt::from(det3(&rows).abs()), "case {case}: {rows:?}");
        }
    }
}

#[test]
fn hermite_form_spans_the_same_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for case in 0..10_000 {
        let rows = random_matrix(&mut rng);
        let n = rows[0].len();
        let h = hnf(&to_matrix(&rows));
        let hrows: Vec<Vec<i64>> =
            (0..h.rows()).map(|i| h.row(i).iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        // Echelon shape with positive pivots and reduced entries above them.
        let mut last = None;
        for (i, r) in hrows.iter().enumerate() {
            let c = r.iter().position(|&x| x != 0).expect("no zero rows");
            assert!(last.is_none_or(|l| c > l), "case {case}: not echelon {hrows:?}");
            assert!(r[c] > 0);
            for above in &hrows[..i] {
                assert!((0..r[c]).contains(&above[c]), "case {case}: {hrows:?}");
            }
            last = Some(c);
        }
        for m in MODULI {
            assert_eq!(brute_quotient_size(&hrows, n, m), brute_quotient_size(&rows, n, m), "case {case}");
        }
    }
}
