//! Elementary number theory over machine words and exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An element of ℤ/mℤ with `m` prime, stored as its least nonnegative residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    pub value: u64,
    pub modulus: u64,
}

impl ResidueClass {
    pub fn new(value: i128, modulus: u64) -> Self {
        Self {
            value: value.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.modulus != 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Self {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Square-and-multiply on raw residues.
pub fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// `base^exponent`. The exponent is first reduced mod `m - 1` when `base` is a unit.
pub fn pow_mod(base: ResidueClass, exponent: u64) -> ResidueClass {
    let m = base.modulus;
    let e = if base.is_unit() && exponent > 0 && m > 2 {
        // Keep the exponent positive so that x^(m-1) still returns 1.
        match exponent % (m - 1) {
            0 => m - 1,
            r => r,
        }
    } else {
        exponent
    };
    ResidueClass {
        value: pow_mod_u64(base.value, e, m),
        modulus: m,
    }
}

/// `x^((ℓ-1)/p) = 1`, the membership test for the subgroup of p-th powers.
pub fn is_pth_power(x: ResidueClass, p: u64) -> Result<bool> {
    let l = x.modulus;
    if p == 0 || (l - 1) % p != 0 {
        return Err(Error::Parameter(format!("{p} does not divide {l} - 1")));
    }
    if !x.is_unit() {
        return Err(Error::NotAUnit(format!("{x}")));
    }
    Ok(pow_mod_u64(x.value, (l - 1) / p, l) == 1)
}

/// Deterministic Miller–Rabin, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn least_primitive_root(l: u64) -> Result<u64> {
    if !is_prime(l) {
        return Err(Error::Parameter(format!("{l} is not prime")));
    }
    if l == 2 {
        return Ok(1);
    }
    let factors = prime_factors(l - 1);
    (2..l)
        .find(|&g| factors.iter().all(|&q| pow_mod_u64(g, (l - 1) / q, l) != 1))
        .ok_or_else(|| Error::Consistency(format!("no primitive root mod {l}")))
}

/// `g^((ℓ-1)/p)` for the least primitive root `g` of ℓ.
pub fn primitive_pth_root(p: u64, l: u64) -> Result<ResidueClass> {
    if !is_prime(p) || !is_prime(l) || (l - 1) % p != 0 {
        return Err(Error::Parameter(format!(
            "need primes p | l - 1, got p = {p}, l = {l}"
        )));
    }
    let g = least_primitive_root(l)?;
    Ok(ResidueClass {
        value: pow_mod_u64(g, (l - 1) / p, l),
        modulus: l,
    })
}

/// Multiplicative order of a unit modulo `m`.
pub fn multiplicative_order(x: u64, m: u64) -> Option<u64> {
    let x = x % m;
    if x == 0 {
        return None;
    }
    let mut y = x;
    for k in 1..m {
        if y == 1 {
            return Some(k);
        }
        y = mul_mod(y, x, m);
    }
    None
}

/// `B_0, …, B_n` from `Σ_{j=0}^{m} C(m+1, j) B_j = 0`, with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut binom = BigInt::one(); // C(m+1, j)
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * &binom;
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigInt::from(m + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().unwrap()
}

/// `p` divides none of the numerators of `B_2, B_4, …, B_{p-3}`.
pub fn is_regular_prime(p: u64) -> Result<bool> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not an odd prime")));
    }
    if p < 5 {
        return Ok(true);
    }
    let b = bernoulli_numbers((p - 3) as usize);
    let pb = BigInt::from(p);
    Ok((2..=(p - 3) as usize)
        .step_by(2)
        .all(|n| !b[n].numer().is_multiple_of(&pb)))
}

pub fn p_adic_valuation(n: i64, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::UndefinedValuation);
    }
    if p < 2 {
        return Err(Error::Parameter(format!("{p} is not a prime")));
    }
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// Legendre symbol `(a/q)` for an odd prime `q`, as -1, 0 or 1.
pub fn legendre(a: i64, q: u64) -> i32 {
    let a = a.rem_euclid(q as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod_u64(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(ResidueClass::new(2, 11), 10).value, 1);
        assert_eq!(pow_mod(ResidueClass::new(3, 11), 5).value, 1);
        assert_eq!(pow_mod(ResidueClass::new(7, 11), 0).value, 1);
        assert_eq!(pow_mod(ResidueClass::new(0, 11), 0).value, 1);
        assert_eq!(pow_mod(ResidueClass::new(0, 11), 3).value, 0);
        assert_eq!(pow_mod(ResidueClass::new(5, 11), 20).value, 1);
    }

    #[test]
    fn pth_power_examples() {
        assert!(is_pth_power(ResidueClass::new(1, 11), 5).unwrap());
        assert!(!is_pth_power(ResidueClass::new(2, 11), 5).unwrap());
        assert!(is_pth_power(ResidueClass::new(10, 11), 5).unwrap());
        assert!(matches!(
            is_pth_power(ResidueClass::new(2, 13), 5),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            is_pth_power(ResidueClass::new(0, 11), 5),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_pth_root(5, 11).unwrap().value, 4);
        assert_eq!(primitive_pth_root(3, 7).unwrap().value, 2);
        assert!(primitive_pth_root(5, 13).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), Rational::new((-1).into(), 2.into()));
        assert_eq!(bernoulli(2), Rational::new(1.into(), 6.into()));
        assert_eq!(bernoulli(12), Rational::new((-691).into(), 2730.into()));
        assert!(bernoulli(13).is_zero());
    }

    #[test]
    fn regularity() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 43] {
            assert!(is_regular_prime(p).unwrap(), "{p}");
        }
        for p in [37u64, 59, 67] {
            assert!(!is_regular_prime(p).unwrap(), "{p}");
        }
        assert!(is_regular_prime(2).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(10, 5).unwrap(), 1);
        assert_eq!(p_adic_valuation(12, 2).unwrap(), 2);
        assert_eq!(p_adic_valuation(-250, 5).unwrap(), 3);
        assert_eq!(p_adic_valuation(0, 5), Err(Error::UndefinedValuation));
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let sieve = primes_up_to(5000);
        let mr: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime(2305843009213693951));
        assert!(!is_prime(3215031751));
    }
}
