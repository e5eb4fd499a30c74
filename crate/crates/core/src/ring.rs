//! The coefficient-ring abstraction shared by polynomials, curves and the
//! point-counting engine.
//!
//! Two rings implement it: the prime field F_q ([`FieldElement`]) and the
//! quadratic quotient ring F_q[z]/(h) ([`RingElement`]). Code written against
//! [`RingElem`] runs unchanged over both; over the quotient ring any attempt
//! to invert a non-unit is surfaced instead of silently failing.
//!
//! [`FieldElement`]: crate::bigmod::FieldElement
//! [`RingElement`]: crate::qring::RingElement

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

/// Classification of a ring element with respect to invertibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unitness {
    Zero,
    Unit,
    /// Nonzero and not invertible (a zero divisor in a finite ring).
    NonUnit,
}

pub trait RingElem:
    Copy
    + Eq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether every nonzero element is invertible.
    const IS_FIELD: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn unitness(&self) -> Unitness;
    /// The inverse, or `None` for zero and non-units.
    fn try_inv(&self) -> Option<Self>;
    /// The characteristic q of the underlying prime field.
    fn characteristic(&self) -> u64;

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

    fn square(&self) -> Self {
        *self * *self
    }

    /// Coefficient convolution of two nonempty slices (polynomial product).
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let zero = a[0].zero_like();
        let mut out = vec![zero; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = out[i + j] + x * y;
            }
        }
        out
    }
}
