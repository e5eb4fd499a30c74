//! Dense univariate polynomials over a [`RingElem`] coefficient ring.
//!
//! Division and Euclid never assume the coefficient ring is a field. Whenever
//! a leading coefficient has to be inverted and turns out to be a non-unit,
//! the offending element is handed back as a [`NonUnitWitness`]. Over
//! F_q[z]/(h) such a witness shares a nontrivial factor with h.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use thiserror::Error;

use crate::bigmod::{FieldElement, PrimeField};
use crate::ring::{RingElem, Unitness};

/// Where a non-invertible element was met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum WitnessLocation {
    Division,
    Gcd,
    RingInverse,
    /// A zero test whose outcome differs between the components of the ring.
    ZeroTest,
    Discriminant,
}

/// A nonzero, non-invertible coefficient encountered during a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonUnitWitness<R> {
    pub element: R,
    pub location: WitnessLocation,
}

impl<R: RingElem> NonUnitWitness<R> {
    pub fn new(element: R, location: WitnessLocation) -> Self {
        debug_assert_eq!(element.unitness(), Unitness::NonUnit);
        Self { element, location }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError<R: fmt::Debug> {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("non-unit leading coefficient {0:?}")]
    NonUnit(NonUnitWitness<R>),
    #[error("cannot parse polynomial from {0:?}")]
    Parse(String),
}

impl<R: fmt::Debug> From<NonUnitWitness<R>> for PolyError<R> {
    fn from(w: NonUnitWitness<R>) -> Self {
        PolyError::NonUnit(w)
    }
}

/// Inverts `c`, or reports it as a witness at `location`.
pub(crate) fn invert_or_witness<R: RingElem>(
    c: R,
    location: WitnessLocation,
) -> Result<R, NonUnitWitness<R>> {
    match c.try_inv() {
        Some(inv) => Ok(inv),
        None => Err(NonUnitWitness::new(c, location)),
    }
}

/// Polynomial with coefficients in ascending degree and no trailing zeros.
/// The zero polynomial has no coefficients and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: RingElem> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`, with the coefficient ring taken from `one`.
    pub fn x(one: R) -> Self {
        Self::monomial(one, 1)
    }

    pub fn monomial(c: R, n: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<R> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, i: usize) -> Option<R> {
        self.coeffs.get(i).copied()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn eval(&self, x: R) -> R {
        let mut acc = x.zero_like();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: R) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * c.from_i64_like(i as i64))
                .collect(),
        )
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; n];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Long division. Fails with a witness when the leading coefficient of
    /// `den` is not invertible.
    pub fn divmod(&self, den: &Self) -> Result<(Self, Self), PolyError<R>> {
        let lead = den.leading_coeff().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = invert_or_witness(lead, WitnessLocation::Division)?;
        Ok(self.divmod_with_inverse(den, lead_inv))
    }

    pub fn rem(&self, den: &Self) -> Result<Self, PolyError<R>> {
        self.divmod(den).map(|(_, r)| r)
    }

    fn divmod_with_inverse(&self, den: &Self, lead_inv: R) -> (Self, Self) {
        let dd = den.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let zero = lead_inv.zero_like();
        let mut quo = vec![zero; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = c * lead_inv;
            quo[i - dd] = factor;
            let base = i - dd;
            for (j, &d) in den.coeffs.iter().enumerate() {
                rem[base + j] = rem[base + j] - factor * d;
            }
        }
        rem.truncate(dd);
        (Self::new(quo), Self::new(rem))
    }

    /// Greatest common divisor by the Euclidean remainder sequence.
    ///
    /// Returns the first non-invertible leading coefficient met as a witness.
    /// Over a field the result is monic; over a ring the terminal remainder
    /// is returned as is.
    pub fn gcd_with_witness(&self, other: &Self) -> Result<Self, PolyError<R>> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        while !b.is_zero() {
            let lead = b.leading_coeff().unwrap();
            let inv = invert_or_witness(lead, WitnessLocation::Gcd)?;
            let (_, r) = a.divmod_with_inverse(&b, inv);
            a = b;
            b = r;
        }
        if R::IS_FIELD {
            a.monic()
        } else {
            Ok(a)
        }
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Result<Self, PolyError<R>> {
        match self.leading_coeff() {
            None => Ok(Self::zero()),
            Some(c) => Ok(self.scale(invert_or_witness(c, WitnessLocation::Division)?)),
        }
    }

    /// `base^exp mod modulus` by square-and-multiply.
    pub fn powmod(&self, exp: &BigUint, modulus: &Self) -> Result<Self, PolyError<R>> {
        let m = PolyModulus::new(modulus.clone())?;
        Ok(m.pow(&m.reduce(self), exp))
    }
}

impl Poly<FieldElement> {
    /// Extended Euclid over a field: returns monic `g = gcd(a, b)` with
    /// `s*a + t*b = g`.
    pub fn xgcd(a: &Self, b: &Self) -> Result<(Self, Self, Self), PolyError<FieldElement>> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::BothZero);
        }
        let one = a
            .leading_coeff()
            .or_else(|| b.leading_coeff())
            .unwrap()
            .one_like();
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::constant(one), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(one));
        while !r1.is_zero() {
            let (quo, rem) = r0.divmod(&r1)?;
            let s2 = &s0 - &(&quo * &s1);
            let t2 = &t0 - &(&quo * &t1);
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        let inv = r0.leading_coeff().unwrap().inv().expect("nonzero in a field");
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Parses the comma-separated ascending coefficient format, e.g.
    /// `"0,12,0,0,3"` for `3x^4 + 12x`.
    pub fn parse(s: &str, field: PrimeField) -> Result<Self, PolyError<FieldElement>> {
        let coeffs = s
            .split(',')
            .map(|c| field.parse_elem(c).map_err(|_| PolyError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    /// The polynomial with the given ascending integer coefficients.
    pub fn from_i64s(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Roots in F_q by exhaustive evaluation.
    pub fn roots_by_scan(&self) -> Vec<FieldElement> {
        match self.leading_coeff() {
            None => Vec::new(),
            Some(c) => c.field().elements().filter(|&x| self.eval(x).is_zero()).collect(),
        }
    }
}

/// A fixed modulus with its leading coefficient inverted once, for repeated
/// reductions (the quotient ring R[x]/(m)).
#[derive(Clone, Debug)]
pub struct PolyModulus<R> {
    modulus: Poly<R>,
    lead_inv: R,
}

impl<R: RingElem> PolyModulus<R> {
    pub fn new(modulus: Poly<R>) -> Result<Self, PolyError<R>> {
        let lead = modulus.leading_coeff().ok_or(PolyError::DivisionByZero)?;
        if modulus.degree() == Some(0) {
            return Err(PolyError::DivisionByZero);
        }
        let lead_inv = invert_or_witness(lead, WitnessLocation::Division)?;
        Ok(Self { modulus, lead_inv })
    }

    pub fn poly(&self) -> &Poly<R> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.coeffs.len() - 1
    }

    pub fn one(&self) -> Poly<R> {
        Poly::constant(self.lead_inv.one_like())
    }

    pub fn x(&self) -> Poly<R> {
        self.reduce(&Poly::x(self.lead_inv.one_like()))
    }

    pub fn reduce(&self, p: &Poly<R>) -> Poly<R> {
        if p.coeffs.len() <= self.degree() {
            return p.clone();
        }
        p.divmod_with_inverse(&self.modulus, self.lead_inv).1
    }

    pub fn mul(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, base: &Poly<R>, exp: &BigUint) -> Poly<R> {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }
}

impl<R: RingElem> Add for &Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &Poly<R>) -> Poly<R> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = *c + s;
        }
        Poly::new(coeffs)
    }
}

impl<R: RingElem> Sub for &Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &Poly<R>) -> Poly<R> {
        self + &(-rhs)
    }
}

impl<R: RingElem> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl<R: RingElem> Mul for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        Poly::new(R::convolve(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<R: RingElem> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: Poly<R>) -> Poly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<R: fmt::Display> fmt::Display for Poly<R> {
    /// Ascending comma-separated coefficients; the zero polynomial is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<R: fmt::Debug> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}
