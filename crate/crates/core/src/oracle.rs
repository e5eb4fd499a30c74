//! Brute-force reference computations for cross-checking.
//!
//! Everything here works by exhaustive enumeration and is meant for small
//! fields only. Field sizes above [`DEFAULT_BOUND`] are refused.

use std::collections::HashMap;

use thiserror::Error;

use crate::bigmod::{FieldElement, PrimeField};
use crate::curve::{Curve, Point};
use crate::poly::Poly;
use crate::qring::{QuadraticRing, RingElement};
use crate::ring::RingElem;

pub const DEFAULT_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("q = {q} exceeds the brute-force bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
    #[error("input polynomial is not quadratic")]
    NotQuadratic,
}

fn check_bound(q: u64, bound: u64) -> Result<(), OracleError> {
    if q > bound {
        Err(OracleError::BoundExceeded { q, bound })
    } else {
        Ok(())
    }
}

/// For each residue, the list of its square roots.
fn square_roots(field: PrimeField) -> HashMap<u64, Vec<FieldElement>> {
    let mut table: HashMap<u64, Vec<FieldElement>> = HashMap::new();
    for y in field.elements() {
        table.entry((y * y).value()).or_default().push(y);
    }
    table
}

/// All points of the curve over F_q: the point at infinity, then affine
/// points ordered by x and then y.
pub fn brute_points(curve: &Curve<FieldElement>) -> Result<Vec<Point<FieldElement>>, OracleError> {
    brute_points_bounded(curve, DEFAULT_BOUND)
}

pub fn brute_points_bounded(
    curve: &Curve<FieldElement>,
    bound: u64,
) -> Result<Vec<Point<FieldElement>>, OracleError> {
    let field = curve.field();
    check_bound(field.modulus(), bound)?;
    let roots = square_roots(field);
    let mut points = vec![Point::Infinity];
    for x in field.elements() {
        if let Some(ys) = roots.get(&curve.rhs(x).value()) {
            for &y in ys {
                points.push(Point::Affine { x, y });
            }
        }
    }
    Ok(points)
}

/// The F_q-rational points P with [m]P = O.
pub fn brute_torsion(
    curve: &Curve<FieldElement>,
    m: i64,
) -> Result<Vec<Point<FieldElement>>, OracleError> {
    Ok(brute_points(curve)?
        .into_iter()
        .filter(|p| {
            curve
                .scalar_mul(m, p)
                .expect("field arithmetic has no non-units")
                .is_infinity()
        })
        .collect())
}

/// F_{q²} as F_q[z]/(z² − n) for the least quadratic non-residue n.
pub fn quadratic_extension(field: PrimeField) -> QuadraticRing {
    let n = field
        .elements()
        .find(|e| e.legendre() == -1)
        .expect("odd q has a non-residue");
    QuadraticRing::new(field, -n, field.zero()).expect("same field")
}

/// The curve with coefficients embedded in F_{q²}.
pub fn lift_to_extension(curve: &Curve<FieldElement>) -> Curve<RingElement> {
    let ext = quadratic_extension(curve.field());
    Curve::new(ext.constant(curve.a()), ext.constant(curve.b())).expect("nonsingular stays nonsingular")
}

/// x ∈ F_q such that some point (x, y) with y ∈ F_{q²}, y ≠ 0, satisfies
/// [m]P = O. Every x ∈ F_q has its y-coordinates in F_{q²}, so this is the set
/// of F_q-rational x-coordinates of nonzero, non-2-torsion m-torsion points.
pub fn brute_torsion_x_over_extension(
    curve: &Curve<FieldElement>,
    m: i64,
) -> Result<Vec<FieldElement>, OracleError> {
    let field = curve.field();
    let q = field.modulus();
    check_bound(q * q, DEFAULT_BOUND * DEFAULT_BOUND)?;
    let lifted = lift_to_extension(curve);
    let ext = quadratic_extension(field);
    let mut xs = Vec::new();
    for x in field.elements() {
        let rhs = ext.constant(curve.rhs(x));
        let y = ext.elements().find(|&y| y * y == rhs).expect("F_q is square in F_q²");
        if y.is_zero() {
            continue;
        }
        let p = Point::Affine {
            x: ext.constant(x),
            y,
        };
        if lifted
            .scalar_mul(m, &p)
            .expect("F_q² is a field")
            .is_infinity()
        {
            xs.push(x);
        }
    }
    Ok(xs)
}

/// #E(F_{q²}) by enumerating all x ∈ F_{q²} against a table of squares.
pub fn brute_count_over_extension(curve: &Curve<FieldElement>) -> Result<u64, OracleError> {
    let field = curve.field();
    let q = field.modulus();
    check_bound(q * q, DEFAULT_BOUND)?;
    let lifted = lift_to_extension(curve);
    let ext = quadratic_extension(field);
    let mut squares: HashMap<RingElement, u64> = HashMap::new();
    for y in ext.elements() {
        *squares.entry(y * y).or_default() += 1;
    }
    let affine: u64 = ext
        .elements()
        .map(|x| squares.get(&lifted.rhs(x)).copied().unwrap_or(0))
        .sum();
    Ok(affine + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteFactor {
    /// The roots in increasing order; equal for a repeated root.
    Roots(FieldElement, FieldElement),
    Irreducible,
}

/// Roots of a quadratic by evaluating it at every element of F_q.
pub fn brute_factor_quadratic(h: &Poly<FieldElement>) -> Result<BruteFactor, OracleError> {
    if h.degree() != Some(2) {
        return Err(OracleError::NotQuadratic);
    }
    let field = h.leading_coeff().unwrap().field();
    check_bound(field.modulus(), DEFAULT_BOUND)?;
    let roots: Vec<FieldElement> = field.elements().filter(|&z| h.eval(z).is_zero()).collect();
    Ok(match roots.as_slice() {
        [] => BruteFactor::Irreducible,
        [r] => BruteFactor::Roots(*r, *r),
        [r, s] => BruteFactor::Roots(*r, *s),
        _ => unreachable!("a quadratic has at most two roots"),
    })
}
