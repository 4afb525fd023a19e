//! Scalar rings used by the linear algebra layer.
//!
//! Rings are values, not types: a residue ring carries its modulus at run
//! time, so every algorithm takes a ring object and manipulates plain
//! element values through it. Four rings are provided:
//!
//! * [`Integers`]: arbitrary precision ℤ.
//! * [`Rationals`]: arbitrary precision ℚ, always in lowest terms.
//! * [`PrimeField`]: 𝔽_p for a word-sized prime.
//! * [`PadicTruncation`]: ℤ/p^N in Montgomery form, a truncation of ℤ_p.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Identifies the ring of a serialized matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingTag {
    Integer,
    Rational,
    ModPrime { p: u64 },
    ModPrimePower { p: u64, n: u32 },
}

pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn tag(&self) -> RingTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        self.add_assign(acc, &t);
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn to_decimal(&self, a: &Self::Elem) -> String;
    fn parse_decimal(&self, s: &str) -> Option<Self::Elem>;
}

/// Principal ideal rings: enough structure for Hermite, Howell and Smith forms.
pub trait Pir: Ring {
    /// Returns `(g, s, t, u, v)` with `s*a + t*b = g`, `u*a + v*b = 0` and
    /// `s*v - t*u` a unit. `g` is the canonical generator of `(a, b)`.
    fn xgcd(
        &self,
        a: &Self::Elem,
        b: &Self::Elem,
    ) -> (Self::Elem, Self::Elem, Self::Elem, Self::Elem, Self::Elem);

    /// A unit `u` such that `u * a` is the canonical associate of `a`.
    fn canonical_unit(&self, a: &Self::Elem) -> Self::Elem;

    /// Canonical representative of `a` modulo the ideal `(g)`.
    fn reduce_mod(&self, a: &Self::Elem, g: &Self::Elem) -> Self::Elem;

    /// `a / b` when `b` divides `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Generator of the annihilator ideal of `a`, if that ideal is nonzero.
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// `v_p(a)`, `None` for zero.
    fn p_valuation(&self, a: &Self::Elem, p: u64) -> Option<u32>;

    /// Image of `a` in 𝔽_p. Only meaningful when `a` is `p`-integral.
    fn reduce_to_fp(&self, a: &Self::Elem, p: u64) -> u64;

    /// Pivot preference: `true` when `a` is a strictly better pivot than `b`.
    /// Both arguments are nonzero.
    fn smaller_pivot(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
}

/// Rings in which every row, after dividing out its content, has a unit entry:
/// fields and ℤ/p^N. Elimination over them only ever pivots on units.
pub trait LocalRing: Pir {
    /// Number of `p`-adic digits of precision consumed by dividing by `c`.
    fn precision_cost(&self, c: &Self::Elem) -> u32;

    /// Number of `p`-adic digits carried, `None` for exact rings.
    fn digits(&self) -> Option<u32> {
        None
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn tag(&self) -> RingTag {
        RingTag::Integer
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        self.is_unit(a).then(|| a.clone())
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn to_decimal(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse_decimal(&self, s: &str) -> Option<BigInt> {
        s.parse().ok()
    }
}

impl Pir for Integers {
    fn xgcd(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt, BigInt, BigInt) {
        if a.is_zero() && b.is_zero() {
            return (
                BigInt::zero(),
                BigInt::one(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::one(),
            );
        }
        let e = a.extended_gcd(b);
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        let u = -(b / &g);
        let v = a / &g;
        (g, s, t, u, v)
    }
    fn canonical_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
    fn reduce_mod(&self, a: &BigInt, g: &BigInt) -> BigInt {
        if g.is_zero() {
            a.clone()
        } else {
            a.mod_floor(&g.abs())
        }
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return a.is_zero().then(BigInt::zero);
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn annihilator(&self, _a: &BigInt) -> Option<BigInt> {
        None
    }
    fn p_valuation(&self, a: &BigInt, p: u64) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        let mut a = a.clone();
        let mut v = 0;
        loop {
            let (q, r) = a.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            a = q;
            v += 1;
        }
    }
    fn reduce_to_fp(&self, a: &BigInt, p: u64) -> u64 {
        a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
    }
    fn smaller_pivot(&self, a: &BigInt, b: &BigInt) -> bool {
        a.magnitude() < b.magnitude()
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> RingTag {
        RingTag::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        if !b.is_zero() {
            *a += b;
        }
    }
    fn mul_add_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn to_decimal(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse_decimal(&self, s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            Some((n, d)) => {
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.trim().parse().ok()?, d))
            }
            None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
        }
    }
}

impl Pir for Rationals {
    fn xgcd(
        &self,
        a: &BigRational,
        b: &BigRational,
    ) -> (
        BigRational,
        BigRational,
        BigRational,
        BigRational,
        BigRational,
    ) {
        field_xgcd(self, a, b)
    }
    fn canonical_unit(&self, a: &BigRational) -> BigRational {
        self.inv(a).unwrap_or_else(|| self.one())
    }
    fn reduce_mod(&self, a: &BigRational, g: &BigRational) -> BigRational {
        if g.is_zero() {
            a.clone()
        } else {
            self.zero()
        }
    }
    fn div_exact(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            a.is_zero().then(|| self.zero())
        } else {
            Some(a / b)
        }
    }
    fn annihilator(&self, _a: &BigRational) -> Option<BigRational> {
        None
    }
    fn p_valuation(&self, a: &BigRational, p: u64) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let vn = Integers.p_valuation(a.numer(), p)?;
        let vd = Integers.p_valuation(a.denom(), p)?;
        Some(vn.saturating_sub(vd))
    }
    fn reduce_to_fp(&self, a: &BigRational, p: u64) -> u64 {
        let n = Integers.reduce_to_fp(a.numer(), p);
        let d = Integers.reduce_to_fp(a.denom(), p);
        let f = PrimeField::new_unchecked(p);
        f.mul(&n, &f.inv(&d).expect("denominator divisible by p"))
    }
    fn smaller_pivot(&self, _a: &BigRational, _b: &BigRational) -> bool {
        false
    }
}

impl LocalRing for Rationals {
    fn precision_cost(&self, _c: &BigRational) -> u32 {
        0
    }
}

fn field_xgcd<R: Ring>(
    ring: &R,
    a: &R::Elem,
    b: &R::Elem,
) -> (R::Elem, R::Elem, R::Elem, R::Elem, R::Elem) {
    if !ring.is_zero(a) {
        let ai = ring.inv(a).unwrap();
        let u = ring.neg(&ring.mul(b, &ai));
        (ring.one(), ai, ring.zero(), u, ring.one())
    } else if !ring.is_zero(b) {
        let bi = ring.inv(b).unwrap();
        (ring.one(), ring.zero(), bi, ring.one(), ring.zero())
    } else {
        (
            ring.zero(),
            ring.one(),
            ring.zero(),
            ring.zero(),
            ring.one(),
        )
    }
}

// ---------------------------------------------------------------------------

/// 𝔽_p for a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not a word-sized prime")));
        }
        Ok(Self { p })
    }

    pub(crate) fn new_unchecked(p: u64) -> Self {
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn tag(&self) -> RingTag {
        RingTag::ModPrime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        Integers.reduce_to_fp(n, self.p)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inverse_mod(*a, self.p)
    }
    fn to_decimal(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_decimal(&self, s: &str) -> Option<u64> {
        let n: BigInt = s.trim().parse().ok()?;
        Some(self.from_bigint(&n))
    }
}

impl Pir for PrimeField {
    fn xgcd(&self, a: &u64, b: &u64) -> (u64, u64, u64, u64, u64) {
        field_xgcd(self, a, b)
    }
    fn canonical_unit(&self, a: &u64) -> u64 {
        self.inv(a).unwrap_or(1)
    }
    fn reduce_mod(&self, a: &u64, g: &u64) -> u64 {
        if *g == 0 {
            *a
        } else {
            0
        }
    }
    fn div_exact(&self, a: &u64, b: &u64) -> Option<u64> {
        if *b == 0 {
            (*a == 0).then_some(0)
        } else {
            Some(self.mul(a, &self.inv(b)?))
        }
    }
    fn annihilator(&self, _a: &u64) -> Option<u64> {
        None
    }
    fn p_valuation(&self, a: &u64, _p: u64) -> Option<u32> {
        (*a != 0).then_some(0)
    }
    fn reduce_to_fp(&self, a: &u64, _p: u64) -> u64 {
        *a
    }
    fn smaller_pivot(&self, _a: &u64, _b: &u64) -> bool {
        false
    }
}

impl LocalRing for PrimeField {
    fn precision_cost(&self, _c: &u64) -> u32 {
        0
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

// ---------------------------------------------------------------------------

/// ℤ/p^N for an odd prime `p`, elements held in Montgomery form.
///
/// Division by `p^e` is exact in ℤ_p but only determines the quotient modulo
/// `p^(N-e)`; callers account for that through [`LocalRing::precision_cost`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicTruncation {
    p: u64,
    n: u32,
    m: u64,
    m_neg_inv: u64,
    r2: u64,
    r1: u64,
}

/// Moduli stay below this bound so Montgomery reduction never overflows.
const MONTGOMERY_BOUND: u64 = 1 << 62;

impl PadicTruncation {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not an odd prime")));
        }
        if n == 0 || n > Self::max_precision(p) {
            return Err(Error::InvalidRing(format!(
                "precision {p}^{n} outside 1..={}",
                Self::max_precision(p)
            )));
        }
        let m = p.pow(n);
        let mut inv: u64 = m;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        debug_assert_eq!(m.wrapping_mul(inv), 1);
        let r1 = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % m as u128) as u64;
        Ok(Self {
            p,
            n,
            m,
            m_neg_inv: inv.wrapping_neg(),
            r2,
            r1,
        })
    }

    /// The largest `N` supported for `p`.
    pub fn max_precision(p: u64) -> u32 {
        let mut n = 0;
        let mut m: u64 = 1;
        while let Some(next) = m.checked_mul(p) {
            if next >= MONTGOMERY_BOUND {
                break;
            }
            m = next;
            n += 1;
        }
        n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// The same prime at a lower precision.
    pub fn truncate(&self, n: u32) -> Result<Self> {
        Self::new(self.p, n.min(self.n))
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let u = (t as u64).wrapping_mul(self.m_neg_inv);
        let r = ((t + u as u128 * self.m as u128) >> 64) as u64;
        if r >= self.m {
            r - self.m
        } else {
            r
        }
    }

    /// Standard representative in `[0, p^N)`.
    #[inline]
    pub fn to_std(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    pub fn from_std(&self, x: u64) -> u64 {
        self.redc((x % self.m) as u128 * self.r2 as u128)
    }

    /// Re-encode an element of a finer truncation of the same prime.
    pub fn reduce_from(&self, other: &PadicTruncation, a: u64) -> u64 {
        debug_assert_eq!(self.p, other.p);
        self.from_std(other.to_std(a))
    }

    fn val(&self, a: u64) -> u32 {
        // Montgomery form preserves v_p because 2^64 is a unit.
        let mut a = a;
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Split a nonzero `a` as `p^v * u` with `u` a unit.
    fn split(&self, a: u64) -> (u32, u64) {
        let x = self.to_std(a);
        let v = self.val(x);
        let u = x / self.p.pow(v);
        (v, self.from_std(u))
    }

    fn p_power(&self, e: u32) -> u64 {
        if e >= self.n {
            0
        } else {
            self.from_std(self.p.pow(e))
        }
    }
}

impl Ring for PadicTruncation {
    type Elem = u64;

    fn tag(&self) -> RingTag {
        RingTag::ModPrimePower {
            p: self.p,
            n: self.n,
        }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.r1
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.from_std(n.rem_euclid(self.m as i64) as u64)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.m)).to_u64().unwrap();
        self.from_std(r)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(*a as u128 * *b as u128)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn is_unit(&self, a: &u64) -> bool {
        a % self.p != 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        let x = inverse_mod(self.to_std(*a), self.m)?;
        Some(self.from_std(x))
    }
    #[inline]
    fn add_assign(&self, a: &mut u64, b: &u64) {
        *a = self.add(a, b);
    }
    #[inline]
    fn mul_add_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        let t = self.mul(a, b);
        *acc = self.add(acc, &t);
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == self.r1
    }
    fn to_decimal(&self, a: &u64) -> String {
        self.to_std(*a).to_string()
    }
    fn parse_decimal(&self, s: &str) -> Option<u64> {
        let n: BigInt = s.trim().parse().ok()?;
        Some(self.from_bigint(&n))
    }
}

impl Pir for PadicTruncation {
    fn xgcd(&self, a: &u64, b: &u64) -> (u64, u64, u64, u64, u64) {
        let (za, zb) = (*a == 0, *b == 0);
        if za && zb {
            return (0, self.one(), 0, 0, self.one());
        }
        let va = if za { u32::MAX } else { self.val(*a) };
        let vb = if zb { u32::MAX } else { self.val(*b) };
        if va <= vb {
            let (v, u) = self.split(*a);
            let ui = self.inv(&u).unwrap();
            let q = self.div_exact(b, a).unwrap();
            (self.p_power(v), ui, 0, self.neg(&q), self.one())
        } else {
            let (v, u) = self.split(*b);
            let ui = self.inv(&u).unwrap();
            let q = self.div_exact(a, b).unwrap();
            (self.p_power(v), 0, ui, self.one(), self.neg(&q))
        }
    }
    fn canonical_unit(&self, a: &u64) -> u64 {
        if *a == 0 {
            return self.one();
        }
        let (_, u) = self.split(*a);
        self.inv(&u).unwrap()
    }
    fn reduce_mod(&self, a: &u64, g: &u64) -> u64 {
        if *g == 0 {
            return *a;
        }
        let pe = self.p.pow(self.val(*g));
        self.from_std(self.to_std(*a) % pe)
    }
    fn div_exact(&self, a: &u64, b: &u64) -> Option<u64> {
        if *b == 0 {
            return (*a == 0).then_some(0);
        }
        if *a == 0 {
            return Some(0);
        }
        let (vb, ub) = self.split(*b);
        let x = self.to_std(*a);
        if self.val(x) < vb {
            return None;
        }
        let q = self.from_std(x / self.p.pow(vb));
        Some(self.mul(&q, &self.inv(&ub).unwrap()))
    }
    fn annihilator(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return Some(self.one());
        }
        let v = self.val(*a);
        (v > 0).then(|| self.p_power(self.n - v))
    }
    fn p_valuation(&self, a: &u64, p: u64) -> Option<u32> {
        debug_assert_eq!(p, self.p);
        (*a != 0).then(|| self.val(*a))
    }
    fn reduce_to_fp(&self, a: &u64, p: u64) -> u64 {
        debug_assert_eq!(p, self.p);
        self.to_std(*a) % p
    }
    fn smaller_pivot(&self, a: &u64, b: &u64) -> bool {
        self.val(*a) < self.val(*b)
    }
}

impl LocalRing for PadicTruncation {
    fn precision_cost(&self, c: &u64) -> u32 {
        if *c == 0 {
            self.n
        } else {
            self.val(*c)
        }
    }
    fn digits(&self) -> Option<u32> {
        Some(self.n)
    }
}
