//! Short Weierstrass curves Y² = X³ + AX + B over a field or a ring.
//!
//! The group law is affine. Over a ring every slope denominator is inverted
//! through [`RingElem::try_inv`], and a non-invertible denominator is returned
//! as a [`NonUnitWitness`].

use num_bigint::{BigInt, Sign};
use num_traits::One;
use thiserror::Error;

use crate::bigmod::{within_hasse, FieldElement, PrimeField};
use crate::poly::{NonUnitWitness, WitnessLocation};
use crate::qring::{QringError, QuadraticRing, RingElement};
use crate::ring::{RingElem, Unitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError<R: std::fmt::Debug> {
    #[error("the curve is singular (4A^3 + 27B^2 = 0)")]
    Singular,
    #[error("the discriminant {0:?} is a nonzero non-unit")]
    NonUnitDiscriminant(NonUnitWitness<R>),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("trace {t} violates |t| <= 2 sqrt({q})")]
    HasseViolation { t: BigInt, q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point<R> {
    Infinity,
    Affine { x: R, y: R },
}

impl<R: RingElem> Point<R> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<R> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(*x),
        }
    }
}

/// Y² = X³ + AX + B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve<R> {
    a: R,
    b: R,
}

impl<R: RingElem> Curve<R> {
    /// Validates 4A³ + 27B²: zero is singular, a nonzero non-unit is a witness.
    pub fn new(a: R, b: R) -> Result<Self, CurveError<R>> {
        let curve = Self { a, b };
        let disc = curve.discriminant();
        match disc.unitness() {
            Unitness::Unit => Ok(curve),
            Unitness::Zero => Err(CurveError::Singular),
            Unitness::NonUnit => Err(CurveError::NonUnitDiscriminant(NonUnitWitness::new(
                disc,
                WitnessLocation::Discriminant,
            ))),
        }
    }

    pub fn a(&self) -> R {
        self.a
    }

    pub fn b(&self) -> R {
        self.b
    }

    /// 4A³ + 27B².
    pub fn discriminant(&self) -> R {
        let a = self.a;
        a.from_i64_like(4) * a * a * a + a.from_i64_like(27) * self.b * self.b
    }

    /// X³ + AX + B.
    pub fn rhs(&self, x: R) -> R {
        x * x * x + self.a * x + self.b
    }

    pub fn contains(&self, p: &Point<R>) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    pub fn point(&self, x: R, y: R) -> Result<Point<R>, CurveError<R>> {
        let p = Point::Affine { x, y };
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(CurveError::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point<R>) -> Point<R> {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: -y },
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &Point<R>, q: &Point<R>) -> Result<Point<R>, NonUnitWitness<R>> {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return Ok(*q),
            (_, Point::Infinity) => return Ok(*p),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if y1 == -y2 {
                return Ok(Point::Infinity);
            }
            if y1 != y2 {
                // equal x but y1 ≠ ±y2: (y1 - y2)(y1 + y2) = 0 with both nonzero
                return Err(NonUnitWitness::new(y1 - y2, WitnessLocation::Division));
            }
            let num = x1.from_i64_like(3) * x1 * x1 + self.a;
            num * invert(y1 + y1)?
        } else {
            (y2 - y1) * invert(x2 - x1)?
        };
        let x3 = lambda * lambda - x1 - x2;
        let y3 = lambda * (x1 - x3) - y1;
        Ok(Point::Affine { x: x3, y: y3 })
    }

    pub fn double(&self, p: &Point<R>) -> Result<Point<R>, NonUnitWitness<R>> {
        self.add(p, p)
    }

    /// `[m]P` by double-and-add; negative `m` negates.
    pub fn scalar_mul(
        &self,
        m: impl Into<BigInt>,
        p: &Point<R>,
    ) -> Result<Point<R>, NonUnitWitness<R>> {
        let m: BigInt = m.into();
        let base = if m.sign() == Sign::Minus { self.neg(p) } else { *p };
        let m = m.magnitude();
        let mut acc = Point::Infinity;
        for i in (0..m.bits()).rev() {
            acc = self.double(&acc)?;
            if m.bit(i) {
                acc = self.add(&acc, &base)?;
            }
        }
        Ok(acc)
    }
}

fn invert<R: RingElem>(d: R) -> Result<R, NonUnitWitness<R>> {
    match d.unitness() {
        Unitness::Unit => Ok(d.try_inv().expect("unit")),
        // a zero denominator only arises for inputs off the curve
        Unitness::Zero => panic!("zero slope denominator"),
        Unitness::NonUnit => Err(NonUnitWitness::new(d, WitnessLocation::Division)),
    }
}

impl Curve<FieldElement> {
    pub fn from_i64s(field: PrimeField, a: i64, b: i64) -> Result<Self, CurveError<FieldElement>> {
        Self::new(field.from_i64(a), field.from_i64(b))
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    /// q + 1 + Σ_x (x³+Ax+B / q), in O(q) Legendre evaluations.
    pub fn naive_count(&self) -> u64 {
        let q = self.a.modulus();
        let sum: i64 = self
            .field()
            .elements()
            .map(|x| self.rhs(x).legendre() as i64)
            .sum();
        (q as i64 + 1 + sum) as u64
    }

    /// A point with x-coordinate `x`, if x³+Ax+B is a square.
    pub fn lift_x(&self, x: FieldElement) -> Option<Point<FieldElement>> {
        let y = sqrt_mod(self.rhs(x))?;
        Some(Point::Affine { x, y })
    }
}

/// A square root in F_q by Tonelli-Shanks, or `None` for non-residues.
pub fn sqrt_mod(a: FieldElement) -> Option<FieldElement> {
    if a.is_zero() {
        return Some(a);
    }
    if a.legendre() != 1 {
        return None;
    }
    let q = a.modulus();
    let f = a.field();
    let (mut s, mut odd) = (0u32, q - 1);
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let mut z = f.elem(2);
    while z.legendre() != -1 {
        z += f.one();
    }
    let mut m = s;
    let mut c = z.pow_u64(odd);
    let mut t = a.pow_u64(odd);
    let mut r = a.pow_u64(odd.div_ceil(2));
    while t != f.one() {
        let mut i = 0;
        let mut t2 = t;
        while t2 != f.one() {
            t2 = t2 * t2;
            i += 1;
        }
        let mut b = c;
        for _ in 0..m - i - 1 {
            b = b * b;
        }
        m = i;
        c = b * b;
        t *= c;
        r *= b;
    }
    Some(r)
}

impl Curve<RingElement> {
    /// A = αz + β, B = γz + δ.
    pub fn from_ring_coeffs(
        ring: QuadraticRing,
        [alpha, beta, gamma, delta]: [FieldElement; 4],
    ) -> Result<Self, CurveError<RingElement>> {
        Self::new(ring.from_parts(beta, alpha), ring.from_parts(delta, gamma))
    }

    /// The coefficient pairs (A, B) of the two fiber curves over F_q, at
    /// `root` and at the other root of h.
    #[allow(clippy::type_complexity)]
    pub fn fiber_coeffs(
        &self,
        root: FieldElement,
    ) -> Result<((FieldElement, FieldElement), (FieldElement, FieldElement)), QringError> {
        let (a1, a2) = self.a.split(root)?;
        let (b1, b2) = self.b.split(root)?;
        Ok(((a1, b1), (a2, b2)))
    }
}

/// t = q + 1 − #E, checked against the Hasse bound.
pub fn trace_of_frobenius(count: &BigInt, q: u64) -> Result<BigInt, CurveError<FieldElement>> {
    let t = BigInt::from(q) + 1 - count;
    if within_hasse(&t, q) {
        Ok(t)
    } else {
        Err(CurveError::HasseViolation { t, q })
    }
}

/// N_1, ..., N_{n_max} with N_n = q^n + 1 − s_n, where s_n are the power sums
/// of the roots of X² − tX + q.
pub fn extension_counts(
    t: &BigInt,
    q: u64,
    n_max: usize,
) -> Result<Vec<BigInt>, CurveError<FieldElement>> {
    if !within_hasse(t, q) {
        return Err(CurveError::HasseViolation { t: t.clone(), q });
    }
    let qb = BigInt::from(q);
    let (mut s_prev, mut s) = (BigInt::from(2), t.clone());
    let mut qn = BigInt::one();
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        qn *= &qb;
        out.push(&qn + 1 - &s);
        let next = t * &s - &qb * &s_prev;
        s_prev = std::mem::replace(&mut s, next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn all_points(c: &Curve<FieldElement>) -> Vec<Point<FieldElement>> {
        let field = c.field();
        let mut pts = vec![Point::Infinity];
        for x in field.elements() {
            for y in field.elements() {
                if y * y == c.rhs(x) {
                    pts.push(Point::Affine { x, y });
                }
            }
        }
        pts
    }

    fn nonsingular(q: u64) -> impl Iterator<Item = Curve<FieldElement>> {
        let field = f(q);
        field
            .elements()
            .flat_map(move |a| field.elements().map(move |b| Curve::new(a, b)))
            .filter_map(Result::ok)
    }

    #[test]
    fn construction_rejects_singular() {
        assert_eq!(Curve::from_i64s(f(5), 0, 0), Err(CurveError::Singular));
        // 4·(-3)^3 + 27·2^2 = 0
        assert_eq!(Curve::from_i64s(f(7), -3, 2), Err(CurveError::Singular));
        assert!(Curve::from_i64s(f(5), 0, 1).is_ok());
    }

    #[test]
    fn ring_discriminant_witness() {
        let field = f(5);
        let ring = QuadraticRing::new(field, field.from_i64(-1), field.zero()).unwrap();
        // A = 0, B = z + 1: discriminant 27(z + 1)^2 vanishes at z = -1 only
        let res = Curve::new(ring.zero(), ring.elem(1, 1));
        match res {
            Err(CurveError::NonUnitDiscriminant(w)) => {
                assert_eq!(w.location, WitnessLocation::Discriminant);
                assert_eq!(w.element.unitness(), Unitness::NonUnit);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn negation_and_doubling_examples() {
        let field = f(5);
        let c = Curve::from_i64s(field, 0, 1).unwrap();
        let p = c.point(field.zero(), field.one()).unwrap();
        let minus_p = c.point(field.zero(), field.elem(4)).unwrap();
        assert_eq!(c.neg(&Point::Infinity), Point::Infinity);
        assert_eq!(c.neg(&p), minus_p);
        assert_eq!(c.double(&p).unwrap(), minus_p);
        assert_eq!(c.add(&p, &Point::Infinity).unwrap(), p);
        assert_eq!(c.add(&p, &minus_p).unwrap(), Point::Infinity);
        for pt in all_points(&c) {
            assert_eq!(c.scalar_mul(6, &pt).unwrap(), Point::Infinity);
            assert_eq!(c.scalar_mul(0, &pt).unwrap(), Point::Infinity);
        }
    }

    #[test]
    fn group_axioms_exhaustive() {
        for q in [5u64, 7, 11, 13] {
            for c in nonsingular(q) {
                let pts = all_points(&c);
                let add = |p: &Point<FieldElement>, r: &Point<FieldElement>| c.add(p, r).unwrap();
                for p in &pts {
                    assert_eq!(add(p, &c.neg(p)), Point::Infinity);
                    assert_eq!(add(p, &Point::Infinity), *p);
                    if let Point::Affine { y, .. } = p {
                        // order-2 points are exactly those with y = 0
                        assert_eq!(add(p, p) == Point::Infinity, y.is_zero());
                    }
                    for r in &pts {
                        let s = add(p, r);
                        assert!(c.contains(&s));
                        assert_eq!(s, add(r, p));
                    }
                }
                // associativity on all triples is cubic in the group size; run
                // it fully on the smaller fields
                if q <= 7 {
                    for p in &pts {
                        for r in &pts {
                            for s in &pts {
                                assert_eq!(add(&add(p, r), s), add(p, &add(r, s)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_on_sampled_triples_larger_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [11u64, 13] {
            for c in nonsingular(q) {
                let pts = all_points(&c);
                for _ in 0..40 {
                    let p = pts[rng.gen_range(0..pts.len())];
                    let r = pts[rng.gen_range(0..pts.len())];
                    let s = pts[rng.gen_range(0..pts.len())];
                    let lhs = c.add(&c.add(&p, &r).unwrap(), &s).unwrap();
                    let rhs = c.add(&p, &c.add(&r, &s).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        for q in [5u64, 7, 11, 13] {
            for c in nonsingular(q).step_by(7) {
                for p in all_points(&c) {
                    let mut acc = Point::Infinity;
                    for m in 1..=12i64 {
                        acc = c.add(&acc, &p).unwrap();
                        assert_eq!(c.scalar_mul(m, &p).unwrap(), acc);
                        assert_eq!(c.scalar_mul(-m, &p).unwrap(), c.neg(&acc));
                    }
                }
            }
        }
    }

    #[test]
    fn naive_count_examples() {
        let field = f(5);
        assert_eq!(Curve::from_i64s(field, 0, 1).unwrap().naive_count(), 6);
        assert_eq!(Curve::from_i64s(field, 1, 0).unwrap().naive_count(), 4);
        assert_eq!(Curve::from_i64s(field, -1, 0).unwrap().naive_count(), 8);
    }

    #[test]
    fn naive_count_matches_enumeration_and_hasse() {
        for q in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            for c in nonsingular(q) {
                let n = c.naive_count();
                assert_eq!(n as usize, all_points(&c).len());
                assert!(trace_of_frobenius(&BigInt::from(n), q).is_ok());
            }
        }
    }

    #[test]
    fn trace_examples() {
        let t = |n: i64| trace_of_frobenius(&BigInt::from(n), 5).unwrap();
        assert_eq!(t(6), BigInt::from(0));
        assert_eq!(t(4), BigInt::from(2));
        assert_eq!(t(8), BigInt::from(-2));
        assert!(matches!(
            trace_of_frobenius(&BigInt::from(11), 5),
            Err(CurveError::HasseViolation { .. })
        ));
    }

    #[test]
    fn extension_count_examples() {
        let n = |t: i64| extension_counts(&BigInt::from(t), 5, 2).unwrap();
        assert_eq!(n(0), vec![BigInt::from(6), BigInt::from(36)]);
        assert_eq!(n(2), vec![BigInt::from(4), BigInt::from(32)]);
        assert!(extension_counts(&BigInt::from(5), 5, 2).is_err());
    }

    #[test]
    fn tonelli_shanks_finds_roots() {
        for q in [5u64, 13, 17, 41, 97, 1_000_000_007] {
            let field = f(q);
            for v in (0..q).step_by((q / 50).max(1) as usize) {
                let a = field.elem(v);
                match sqrt_mod(a) {
                    Some(r) => assert_eq!(r * r, a),
                    None => assert_eq!(a.legendre(), -1),
                }
            }
        }
    }
}
