//! The projective line over 𝔽_ℓ, indexing Manin symbols.

use crate::ring::inverse_mod;

/// `P¹(𝔽_ℓ)` with `(1:t) ↦ t` for `t < ℓ` and `(0:1) ↦ ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P1 {
    l: u64,
}

impl P1 {
    pub fn new(l: u64) -> Self {
        Self { l }
    }

    pub fn len(&self) -> usize {
        self.l as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the point `(c:d)`, or `None` when `c ≡ d ≡ 0`.
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let l = self.l as i64;
        let (c, d) = (c.rem_euclid(l) as u64, d.rem_euclid(l) as u64);
        if c == 0 {
            return (d != 0).then_some(self.l as usize);
        }
        let ci = inverse_mod(c, self.l)?;
        Some(((d as u128 * ci as u128) % self.l as u128) as usize)
    }

    /// A matrix `(a b; c d)` of determinant 1 whose bottom row represents the point.
    pub fn lift(&self, idx: usize) -> [i64; 4] {
        if idx as u64 == self.l {
            [1, 0, 0, 1]
        } else {
            [0, -1, 1, idx as i64]
        }
    }
}
