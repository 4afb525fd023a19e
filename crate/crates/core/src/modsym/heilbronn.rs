//! Merel's matrices of determinant `n`, realizing `T_n` on Manin symbols.

/// All `(a b; c d)` with `a > b ≥ 0`, `d > c ≥ 0` and `ad - bc = n`.
pub fn merel(n: i64) -> Vec<[i64; 4]> {
    let mut out = vec![];
    for a in 1..=n {
        let q = n / a;
        if q * a == n {
            let d = q;
            for b in 0..a {
                out.push([a, b, 0, d]);
            }
            for c in 1..d {
                out.push([a, 0, c, d]);
            }
        }
        for d in q + 1..=n {
            let bc = a * d - n;
            for c in bc / a + 1..d {
                if bc % c == 0 {
                    out.push([a, bc / c, c, d]);
                }
            }
        }
    }
    out
}
