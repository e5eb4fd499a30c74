//! The quotient ring R = F_q[z]/(h) for a monic quadratic h.
//!
//! When h splits with distinct roots a and b, R is isomorphic to F_q × F_q via
//! u ↦ (u(a), u(b)), and the non-units are exactly the nonzero elements with
//! one vanishing component. When h is irreducible R is the field F_{q²}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use thiserror::Error;

use crate::bigmod::{FieldElement, PrimeField};
use crate::poly::{NonUnitWitness, Poly, WitnessLocation};
use crate::ring::{RingElem, Unitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QringError {
    #[error("modulus must be a quadratic polynomial")]
    NotQuadratic,
    #[error("coefficients come from different prime fields")]
    ModulusMismatch,
    #[error("{0} is not a root of h")]
    NotARoot(u64),
    #[error("h has a repeated root")]
    RepeatedRoot,
    #[error("cannot parse ring element from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingInvError {
    ZeroInverse,
    NonUnit(NonUnitWitness<RingElement>),
}

/// The ring F_q[z]/(z² + h1·z + h0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticRing {
    h0: FieldElement,
    h1: FieldElement,
}

impl QuadraticRing {
    pub fn new(field: PrimeField, h0: FieldElement, h1: FieldElement) -> Result<Self, QringError> {
        if h0.modulus() != field.modulus() || h1.modulus() != field.modulus() {
            return Err(QringError::ModulusMismatch);
        }
        Ok(Self { h0, h1 })
    }

    /// Builds the ring from a degree-2 polynomial, dividing through by its
    /// leading coefficient.
    pub fn from_poly(h: &Poly<FieldElement>) -> Result<Self, QringError> {
        if h.degree() != Some(2) {
            return Err(QringError::NotQuadratic);
        }
        let h = h.monic().map_err(|_| QringError::NotQuadratic)?;
        Ok(Self {
            h0: h.coeffs()[0],
            h1: h.coeffs()[1],
        })
    }

    pub fn field(&self) -> PrimeField {
        self.h0.field()
    }

    /// h as a monic polynomial in z.
    pub fn modulus_poly(&self) -> Poly<FieldElement> {
        Poly::new(vec![self.h0, self.h1, self.h0.one_like()])
    }

    pub fn h0(&self) -> FieldElement {
        self.h0
    }

    pub fn h1(&self) -> FieldElement {
        self.h1
    }

    pub fn from_parts(&self, c0: FieldElement, c1: FieldElement) -> RingElement {
        RingElement { c0, c1, ring: *self }
    }

    /// The element `c0 + c1*z` from signed integers.
    pub fn elem(&self, c0: i64, c1: i64) -> RingElement {
        let f = self.field();
        self.from_parts(f.from_i64(c0), f.from_i64(c1))
    }

    pub fn constant(&self, c: FieldElement) -> RingElement {
        self.from_parts(c, c.zero_like())
    }

    pub fn zero(&self) -> RingElement {
        self.elem(0, 0)
    }

    pub fn one(&self) -> RingElement {
        self.elem(1, 0)
    }

    pub fn z(&self) -> RingElement {
        self.elem(0, 1)
    }

    /// Reduces a polynomial in z modulo h.
    pub fn from_poly_z(&self, p: &Poly<FieldElement>) -> RingElement {
        let z = self.z();
        p.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| acc * z + self.constant(c))
    }

    /// All q² elements, constant coefficient varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> {
        let (f, ring) = (self.field(), *self);
        f.elements()
            .flat_map(move |c1| f.elements().map(move |c0| ring.from_parts(c0, c1)))
    }

    /// Parses `"c0+c1*z"`, or a bare constant `"c0"`.
    pub fn parse_elem(&self, s: &str) -> Result<RingElement, QringError> {
        let err = || QringError::Parse(s.to_string());
        let f = self.field();
        let s = s.trim();
        match s.split_once('+') {
            Some((c0, rest)) => {
                let c1 = rest.strip_suffix("*z").ok_or_else(err)?;
                let c0 = f.parse_elem(c0).map_err(|_| err())?;
                let c1 = f.parse_elem(c1).map_err(|_| err())?;
                Ok(self.from_parts(c0, c1))
            }
            None => Ok(self.constant(f.parse_elem(s).map_err(|_| err())?)),
        }
    }
}

/// `c0 + c1*z` in F_q[z]/(h).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElement {
    c0: FieldElement,
    c1: FieldElement,
    ring: QuadraticRing,
}

impl RingElement {
    pub fn c0(&self) -> FieldElement {
        self.c0
    }

    pub fn c1(&self) -> FieldElement {
        self.c1
    }

    pub fn ring(&self) -> QuadraticRing {
        self.ring
    }

    pub fn to_poly(&self) -> Poly<FieldElement> {
        Poly::new(vec![self.c0, self.c1])
    }

    /// The product of the images at the two roots of h, as an element of F_q.
    /// Nonzero exactly when the element is a unit.
    pub fn norm(&self) -> FieldElement {
        let QuadraticRing { h0, h1 } = self.ring;
        self.c0 * self.c0 - h1 * self.c0 * self.c1 + h0 * self.c1 * self.c1
    }

    /// The image under z ↦ −h1 − z, which swaps the roots of h.
    pub fn conjugate(&self) -> RingElement {
        self.ring
            .from_parts(self.c0 - self.ring.h1 * self.c1, -self.c1)
    }

    /// Inverse by extended Euclid of u(z) against h(z).
    pub fn inv_attempt(&self) -> Result<RingElement, RingInvError> {
        if self.is_zero() {
            return Err(RingInvError::ZeroInverse);
        }
        let (g, s, _) = Poly::xgcd(&self.to_poly(), &self.ring.modulus_poly())
            .expect("u is nonzero");
        if g.degree() == Some(0) {
            Ok(self.ring.from_poly_z(&s))
        } else {
            Err(RingInvError::NonUnit(NonUnitWitness::new(
                *self,
                WitnessLocation::RingInverse,
            )))
        }
    }

    /// Evaluations at `root` and at the other root `−root − h1` of h.
    pub fn split(&self, root: FieldElement) -> Result<(FieldElement, FieldElement), QringError> {
        let h = self.ring.modulus_poly();
        if !h.eval(root).is_zero() {
            return Err(QringError::NotARoot(root.value()));
        }
        let other = -root - self.ring.h1;
        if other == root {
            return Err(QringError::RepeatedRoot);
        }
        Ok((self.c0 + self.c1 * root, self.c0 + self.c1 * other))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*z", self.c0, self.c1)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*z (mod {})", self.c0, self.c1, self.c0.modulus())
    }
}

impl Add for RingElement {
    type Output = RingElement;
    #[inline]
    fn add(self, rhs: RingElement) -> RingElement {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElement {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
            ring: self.ring,
        }
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    #[inline]
    fn sub(self, rhs: RingElement) -> RingElement {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElement {
            c0: self.c0 - rhs.c0,
            c1: self.c1 - rhs.c1,
            ring: self.ring,
        }
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    #[inline]
    fn mul(self, rhs: RingElement) -> RingElement {
        debug_assert_eq!(self.ring, rhs.ring);
        // z² = −h1·z − h0
        let hi = self.c1 * rhs.c1;
        RingElement {
            c0: self.c0 * rhs.c0 - self.ring.h0 * hi,
            c1: self.c0 * rhs.c1 + self.c1 * rhs.c0 - self.ring.h1 * hi,
            ring: self.ring,
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    #[inline]
    fn neg(self) -> RingElement {
        RingElement {
            c0: -self.c0,
            c1: -self.c1,
            ring: self.ring,
        }
    }
}

impl RingElem for RingElement {
    const IS_FIELD: bool = false;

    fn zero_like(&self) -> Self {
        self.ring.zero()
    }

    fn one_like(&self) -> Self {
        self.ring.one()
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.ring.elem(n, 0)
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    fn unitness(&self) -> Unitness {
        if self.is_zero() {
            Unitness::Zero
        } else if self.norm().is_zero() {
            Unitness::NonUnit
        } else {
            Unitness::Unit
        }
    }

    /// Conjugate over norm; agrees with [`RingElement::inv_attempt`].
    fn try_inv(&self) -> Option<Self> {
        let n = self.norm().inv().ok()?;
        let c = self.conjugate();
        Some(self.ring.from_parts(c.c0 * n, c.c1 * n))
    }

    fn characteristic(&self) -> u64 {
        self.c0.modulus()
    }

    fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = self.one_like();
        for i in (0..exp.bits()).rev() {
            acc = acc * acc;
            if exp.bit(i) {
                acc = acc * *self;
            }
        }
        acc
    }
}
