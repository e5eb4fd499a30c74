//! Prime-field arithmetic modulo an odd prime `q > 3`.
//!
//! Residues are stored as `u64` words and multiplied through `u128`, so any
//! prime below 2^64 is supported. Exponents and other integers that can grow
//! past a word (powers `q^n`, exponents such as `q^2 - 1`) are taken as
//! [`BigUint`] / [`BigInt`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::ring::{RingElem, Unitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("characteristic {0} is not supported (need q > 3)")]
    CharTooSmall(u64),
    #[error("modulus {0} does not fit in 64 bits")]
    ModulusTooLarge(BigUint),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("cannot parse field element from {0:?}")]
    Parse(String),
}

/// Witnesses for deterministic Miller-Rabin: the first twelve primes are
/// sufficient for every n < 3.3 * 10^24, in particular for all of u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The prime field F_q. Construction validates that `q` is a prime above 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q == 2 || q == 3 {
            return Err(FieldError::CharTooSmall(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(BigUint::from(q)));
        }
        Ok(Self { q })
    }

    /// Like [`PrimeField::new`] but for arbitrary-precision input.
    pub fn from_biguint(q: &BigUint) -> Result<Self, FieldError> {
        match q.to_u64() {
            Some(q) => Self::new(q),
            None => Err(FieldError::ModulusTooLarge(q.clone())),
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.q,
            q: self.q,
        }
    }

    pub fn from_i64(&self, value: i64) -> FieldElement {
        let r = (value as i128).rem_euclid(self.q as i128);
        self.elem(r as u64)
    }

    pub fn from_bigint(&self, value: &BigInt) -> FieldElement {
        let m = BigInt::from(self.q);
        let mut r = value % &m;
        if r.sign() == Sign::Minus {
            r += &m;
        }
        self.elem(r.to_u64().expect("reduced residue fits in u64"))
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Iterates over every residue `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let q = self.q;
        (0..q).map(move |value| FieldElement { value, q })
    }

    /// Legendre symbol `(a/q)` by Euler's criterion: `a^((q-1)/2)` mapped
    /// to `{-1, 0, 1}`.
    pub fn legendre(&self, a: &BigInt) -> i8 {
        self.from_bigint(a).legendre()
    }

    pub fn parse_elem(&self, s: &str) -> Result<FieldElement, FieldError> {
        let v = BigInt::from_str(s.trim()).map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(self.from_bigint(&v))
    }
}

/// A residue modulo a prime `q`, always kept in `[0, q)`.
///
/// Elements carry their modulus so they can be used as coefficients in
/// generic polynomial code; mixing moduli is a logic error.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    q: u64,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.q }
    }

    /// Square-and-multiply exponentiation.
    pub fn pow_biguint(&self, exp: &BigUint) -> FieldElement {
        let mut acc = 1 % self.q;
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = mul_mod(acc, acc, self.q);
            if exp.bit(i) {
                acc = mul_mod(acc, self.value, self.q);
            }
        }
        FieldElement { value: acc, q: self.q }
    }

    pub fn pow_u64(&self, exp: u64) -> FieldElement {
        FieldElement {
            value: pow_mod(self.value, exp, self.q),
            q: self.q,
        }
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.q as i128, self.value as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let quo = r0 / r1;
            (r0, r1) = (r1, r0 - quo * r1);
            (s0, s1) = (s1, s0 - quo * s1);
        }
        debug_assert_eq!(r0, 1);
        let v = s0.rem_euclid(self.q as i128) as u64;
        Ok(FieldElement { value: v, q: self.q })
    }

    pub fn legendre(&self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        let e = self.pow_u64((self.q - 1) / 2);
        if e.value == 1 {
            1
        } else {
            -1
        }
    }

    /// The representative in `(-q/2, q/2]`.
    pub fn centered(&self) -> i128 {
        let v = self.value as i128;
        if v > (self.q / 2) as i128 {
            v - self.q as i128
        } else {
            v
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.q)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        let (s, overflow) = self.value.overflowing_add(rhs.value);
        let v = if overflow || s >= self.q { s.wrapping_sub(self.q) } else { s };
        FieldElement { value: v, q: self.q }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.q - (rhs.value - self.value)
        };
        FieldElement { value: v, q: self.q }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement {
            value: mul_mod(self.value, rhs.value, self.q),
            q: self.q,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> FieldElement {
        let v = if self.value == 0 { 0 } else { self.q - self.value };
        FieldElement { value: v, q: self.q }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

impl RingElem for FieldElement {
    const IS_FIELD: bool = true;

    fn zero_like(&self) -> Self {
        FieldElement { value: 0, q: self.q }
    }

    fn one_like(&self) -> Self {
        FieldElement { value: 1, q: self.q }
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.field().from_i64(n)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn unitness(&self) -> Unitness {
        if self.value == 0 {
            Unitness::Zero
        } else {
            Unitness::Unit
        }
    }

    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }

    fn characteristic(&self) -> u64 {
        self.q
    }

    fn pow(&self, exp: &BigUint) -> Self {
        self.pow_biguint(exp)
    }

    /// Accumulates unreduced products in `u128` and reduces once per slot.
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let q = a[0].q;
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        if q < 1 << 32 {
            for (i, x) in a.iter().enumerate() {
                if x.value == 0 {
                    continue;
                }
                for (slot, y) in acc[i..].iter_mut().zip(b) {
                    *slot += (x.value * y.value) as u128;
                }
            }
        } else {
            let qq = q as u128;
            for (i, x) in a.iter().enumerate() {
                if x.value == 0 {
                    continue;
                }
                for (slot, y) in acc[i..].iter_mut().zip(b) {
                    *slot += (x.value as u128 * y.value as u128) % qq;
                }
            }
        }
        let qq = q as u128;
        acc.into_iter()
            .map(|v| FieldElement { value: (v % qq) as u64, q })
            .collect()
    }
}

/// `true` iff `|t| <= 2 sqrt(q)`, decided exactly as `t^2 <= 4q`.
pub fn within_hasse(t: &BigInt, q: u64) -> bool {
    let t2 = t * t;
    t2 <= BigInt::from(4u8) * BigInt::from(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_PRIMES: [u64; 24] = [
        5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
        101,
    ];

    #[test]
    fn field_context_validation() {
        assert!(PrimeField::new(5).is_ok());
        assert_eq!(PrimeField::new(4), Err(FieldError::NotPrime(BigUint::from(4u8))));
        assert_eq!(PrimeField::new(3), Err(FieldError::CharTooSmall(3)));
        assert_eq!(PrimeField::new(2), Err(FieldError::CharTooSmall(2)));
        assert!(matches!(PrimeField::new(1), Err(FieldError::NotPrime(_))));
        assert!(PrimeField::new(1073741789).is_ok());
        assert!(matches!(PrimeField::new(1073741789 * 3), Err(FieldError::NotPrime(_))));
        let huge = BigUint::from(u64::MAX) + 2u8;
        assert!(matches!(PrimeField::from_biguint(&huge), Err(FieldError::ModulusTooLarge(_))));
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        fn trial(n: u64) -> bool {
            n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
        }
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        // strong pseudoprimes to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn mod_exp_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.elem(2).pow_u64(0), f5.one());
        assert_eq!(f5.elem(2).pow_u64(2), f5.elem(4));

        let f101 = PrimeField::new(101).unwrap();
        let base = f101.elem(3);
        let mut expected = f101.one();
        for _ in 0..47 {
            expected *= base;
        }
        assert_eq!(base.pow_u64(47), expected);
        assert_eq!(base.pow_biguint(&BigUint::from(47u8)), expected);
    }

    #[test]
    fn big_exponents() {
        let f = PrimeField::new(1073741789).unwrap();
        let x = f.elem(123456789);
        let q = BigUint::from(f.modulus());
        // x^(q^2) = x
        assert_eq!(x.pow_biguint(&(&q * &q)), x);
        assert_eq!(x.pow_biguint(&BigUint::from(0u8)), f.one());
    }

    #[test]
    fn mod_inv_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.one().inv().unwrap(), f5.one());
        assert_eq!(f5.elem(2).inv().unwrap(), f5.elem(3));
        assert_eq!(f5.zero().inv(), Err(FieldError::ZeroInverse));

        let f101 = PrimeField::new(101).unwrap();
        let scan = (1..101).find(|y| 7 * y % 101 == 1).unwrap();
        assert_eq!(f101.elem(7).inv().unwrap().value(), scan);
    }

    #[test]
    fn legendre_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.legendre(&BigInt::from(4)), 1);
        assert_eq!(f5.legendre(&BigInt::from(0)), 0);
        assert_eq!(f5.legendre(&BigInt::from(2)), -1);
        assert_eq!(f5.legendre(&BigInt::from(-1)), 1);
        assert_eq!(f5.legendre(&BigInt::from(10)), 0);
    }

    #[test]
    fn exhaustive_small_field_laws() {
        for &q in &SMALL_PRIMES {
            let f = PrimeField::new(q).unwrap();
            let squares: Vec<u64> = (0..q).map(|y| y * y % q).collect();
            for x in f.elements() {
                let enumerated = if x.value() == 0 {
                    0
                } else if squares.contains(&x.value()) {
                    1
                } else {
                    -1
                };
                assert_eq!(x.legendre(), enumerated, "q={q} x={x}");
                if x.value() != 0 {
                    assert_eq!(x * x.inv().unwrap(), f.one());
                    assert_eq!(x.pow_u64(q - 1), f.one());
                }
            }
        }
    }

    #[test]
    fn arithmetic_near_word_boundary() {
        let q = 18_446_744_073_709_551_557u64;
        let f = PrimeField::new(q).unwrap();
        let a = f.elem(q - 1);
        let b = f.elem(q - 2);
        assert_eq!((a + b).value(), q - 3);
        assert_eq!((a * b).value(), 2);
        assert_eq!((b - a).value(), q - 1);
        assert_eq!((-a).value(), 1);
        assert_eq!(a * a.inv().unwrap(), f.one());
    }

    #[test]
    fn signed_and_centered() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1).value(), 6);
        assert_eq!(f.from_bigint(&BigInt::from(-15)).value(), 6);
        assert_eq!(f.elem(6).centered(), -1);
        assert_eq!(f.elem(3).centered(), 3);
        assert_eq!(f.elem(4).centered(), -3);
        assert_eq!(f.parse_elem(" -2 ").unwrap().value(), 5);
        assert!(f.parse_elem("x").is_err());
    }

    #[test]
    fn hasse_window_is_exact() {
        assert!(within_hasse(&BigInt::from(4), 4));
        assert!(within_hasse(&BigInt::from(-4), 5));
        assert!(!within_hasse(&BigInt::from(5), 6));
    }
}
