//! Deterministic factoring of a split monic quadratic h over F_q.
//!
//! A curve over R = F_q[z]/(h) is pushed through the point-counting engine.
//! When the two fiber curves over F_q have traces that differ modulo one of
//! the small primes, the computation meets a non-unit c(z) of R, and
//! gcd(c, h) is a linear factor of h.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::bigmod::{FieldElement, PrimeField};
use crate::curve::{Curve, CurveError};
use crate::poly::{NonUnitWitness, Poly, WitnessLocation};
use crate::qring::{QuadraticRing, RingElement};
use crate::ring::RingElem;
use crate::schoof::{schoof_over_ring, SchoofError, SchoofOutcome};

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HStatus {
    Split,
    Irreducible,
    NotSquarefree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("h must have degree 2")]
    NotQuadratic,
    #[error("h is irreducible over F_q")]
    Irreducible,
    #[error("curve coefficients give a singular curve over the ring")]
    SingularCurve,
    #[error("no curve among the first {budget} candidates produced a witness")]
    ExhaustedEnumeration { budget: usize },
    #[error("the curve's fibers agree modulo every small prime")]
    NoSplitFound,
    #[error("gcd of the witness with h is not a proper factor")]
    HypothesisCheckFailed,
    #[error("point counting failed: {0}")]
    Schoof(#[from] SchoofError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResult {
    /// Monic linear factors ordered by constant term.
    pub factors: [Poly<FieldElement>; 2],
    pub witness: NonUnitWitness<RingElement>,
    /// The prime at which the witness appeared; `None` when the curve's
    /// discriminant was itself a non-unit.
    pub witness_l: Option<u64>,
    /// (α, β, γ, δ) with A = αz + β, B = γz + δ.
    pub curve_used: [FieldElement; 4],
    pub curves_tried: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorization {
    Distinct(FactorizationResult),
    /// h = factor², found from gcd(h, h′).
    Repeated(Poly<FieldElement>),
}

/// Classifies h after making it monic.
pub fn validate_h(h: &Poly<FieldElement>) -> Result<HStatus, FactorError> {
    let h = monic_quadratic(h)?;
    let gcd = h.gcd_with_witness(&h.derivative()).expect("field gcd");
    if gcd.degree() != Some(0) {
        return Ok(HStatus::NotSquarefree);
    }
    let x = Poly::x(h.coeffs()[0].one_like());
    let q = h.coeffs()[0].modulus();
    let zq = x.powmod(&BigUint::from(q), &h).expect("monic modulus");
    Ok(if zq == x { HStatus::Split } else { HStatus::Irreducible })
}

fn monic_quadratic(h: &Poly<FieldElement>) -> Result<Poly<FieldElement>, FactorError> {
    if h.degree() != Some(2) {
        return Err(FactorError::NotQuadratic);
    }
    Ok(h.monic().expect("nonzero leading coefficient"))
}

/// Turns a witness into the two monic linear factors of h.
fn factors_from_witness(
    h: &Poly<FieldElement>,
    witness: &RingElement,
) -> Result<[Poly<FieldElement>; 2], FactorError> {
    let g = witness
        .to_poly()
        .gcd_with_witness(h)
        .map_err(|_| FactorError::HypothesisCheckFailed)?;
    if g.degree() != Some(1) {
        return Err(FactorError::HypothesisCheckFailed);
    }
    let (other, rem) = h.divmod(&g).expect("monic divisor");
    debug_assert!(rem.is_zero());
    let mut factors = [g, other];
    factors.sort_by_key(|p| p.coeffs()[0].value());
    Ok(factors)
}

/// Runs the ring computation for the curve A = αz + β, B = γz + δ.
pub fn factor_with_curve(
    h: &Poly<FieldElement>,
    coeffs: [FieldElement; 4],
) -> Result<FactorizationResult, FactorError> {
    let h = monic_quadratic(h)?;
    let ring = QuadraticRing::from_poly(&h).map_err(|_| FactorError::NotQuadratic)?;
    let (witness, witness_l) = match Curve::from_ring_coeffs(ring, coeffs) {
        Err(CurveError::NonUnitDiscriminant(w)) => (w, None),
        Err(_) => return Err(FactorError::SingularCurve),
        Ok(curve) => match schoof_over_ring(&curve)? {
            SchoofOutcome::Witness { witness, l } => (witness, Some(l)),
            SchoofOutcome::Counted(_) => return Err(FactorError::NoSplitFound),
        },
    };
    Ok(FactorizationResult {
        factors: factors_from_witness(&h, &witness.element)?,
        witness,
        witness_l,
        curve_used: coeffs,
        curves_tried: 1,
    })
}

/// Candidate (α, β, γ, δ) in lexicographic order starting at (1, 0, 0, 0) and
/// wrapping around to the α = 0 block. Curves with α = γ = 0 have identical
/// fibers and are left out.
pub fn curve_enumeration(field: PrimeField) -> impl Iterator<Item = [FieldElement; 4]> {
    let q = field.modulus() as u128;
    let total = q.pow(4);
    (0..total).filter_map(move |i| {
        let n = (i + q.pow(3)) % total;
        let digit = |k: u32| field.elem(((n / q.pow(k)) % q) as u64);
        let c = [digit(3), digit(2), digit(1), digit(0)];
        if c[0].value() == 0 && c[2].value() == 0 {
            None
        } else {
            Some(c)
        }
    })
}

/// Factors h, trying enumerated curves until one yields a witness.
pub fn factor(h: &Poly<FieldElement>, budget: usize) -> Result<Factorization, FactorError> {
    let h = monic_quadratic(h)?;
    match validate_h(&h)? {
        HStatus::Irreducible => return Err(FactorError::Irreducible),
        HStatus::NotSquarefree => {
            let g = h.gcd_with_witness(&h.derivative()).expect("field gcd");
            return Ok(Factorization::Repeated(g));
        }
        HStatus::Split => {}
    }
    let field = h.coeffs()[0].field();
    let ring = QuadraticRing::from_poly(&h).map_err(|_| FactorError::NotQuadratic)?;
    let mut tried = 0;
    for coeffs in curve_enumeration(field) {
        if tried == budget {
            break;
        }
        let ring_curve = Curve::from_ring_coeffs(ring, coeffs);
        if matches!(ring_curve, Err(CurveError::Singular)) {
            continue;
        }
        tried += 1;
        match factor_with_curve(&h, coeffs) {
            Ok(mut result) => {
                result.curves_tried = tried;
                return Ok(Factorization::Distinct(result));
            }
            Err(FactorError::NoSplitFound) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(FactorError::ExhaustedEnumeration { budget })
}

/// Where in the computation the witness came from, as text.
pub fn location_name(location: WitnessLocation) -> &'static str {
    match location {
        WitnessLocation::Division => "division",
        WitnessLocation::Gcd => "gcd",
        WitnessLocation::RingInverse => "ring_inverse",
        WitnessLocation::ZeroTest => "zero_test",
        WitnessLocation::Discriminant => "discriminant",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn p(q: u64, c: &[i64]) -> Poly<FieldElement> {
        Poly::from_i64s(f(q), c)
    }

    fn coeffs(q: u64, c: [i64; 4]) -> [FieldElement; 4] {
        c.map(|v| f(q).from_i64(v))
    }

    /// Traces of the two fiber curves, or None if either is singular.
    fn fiber_traces(h: &Poly<FieldElement>, c: [FieldElement; 4]) -> Option<(i64, i64)> {
        let ring = QuadraticRing::from_poly(h).unwrap();
        let curve = Curve::from_ring_coeffs(ring, c).ok()?;
        let root = h.roots_by_scan()[0];
        let ((a1, b1), (a2, b2)) = curve.fiber_coeffs(root).unwrap();
        let q = root.modulus() as i64;
        let t = |a, b| q + 1 - Curve::new(a, b).unwrap().naive_count() as i64;
        Some((t(a1, b1), t(a2, b2)))
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate_h(&p(5, &[-1, 0, 1])), Ok(HStatus::Split));
        assert_eq!(validate_h(&p(5, &[-2, 0, 1])), Ok(HStatus::Irreducible));
        assert_eq!(validate_h(&p(5, &[1, 3, 1])), Ok(HStatus::NotSquarefree));
        assert_eq!(validate_h(&p(5, &[2, 0, 2])), Ok(HStatus::Split));
        assert_eq!(validate_h(&p(5, &[1, 1])), Err(FactorError::NotQuadratic));
    }

    #[test]
    fn seven_one_example_curve() {
        let h = p(5, &[-1, 0, 1]);
        let r = factor_with_curve(&h, coeffs(5, [1, 0, 0, 0])).unwrap();
        assert_eq!(r.factors, [p(5, &[1, 1]), p(5, &[4, 1])]);
        assert_eq!(r.witness_l, Some(3));
        for factor in &r.factors {
            assert!(h.rem(factor).unwrap().is_zero());
        }
    }

    #[test]
    fn constant_curve_finds_nothing() {
        let h = p(5, &[-1, 0, 1]);
        assert_eq!(
            factor_with_curve(&h, coeffs(5, [0, 0, 0, 1])),
            Err(FactorError::NoSplitFound)
        );
    }

    #[test]
    fn factor_examples() {
        let Factorization::Distinct(r) = factor(&p(5, &[-1, 0, 1]), DEFAULT_BUDGET).unwrap() else {
            panic!()
        };
        assert_eq!(r.factors, [p(5, &[1, 1]), p(5, &[4, 1])]);
        assert_eq!(r.curve_used, coeffs(5, [1, 0, 0, 0]));

        let Factorization::Distinct(r) = factor(&p(13, &[-4, 0, 1]), DEFAULT_BUDGET).unwrap() else {
            panic!()
        };
        assert_eq!(r.factors, [p(13, &[2, 1]), p(13, &[-2, 1])]);

        assert_eq!(factor(&p(5, &[-2, 0, 1]), 64), Err(FactorError::Irreducible));
        assert_eq!(
            factor(&p(5, &[1, 3, 1]), 64),
            Ok(Factorization::Repeated(p(5, &[4, 1])))
        );
    }

    #[test]
    fn enumeration_order() {
        let first: Vec<_> = curve_enumeration(f(5)).take(3).collect();
        assert_eq!(first[0], coeffs(5, [1, 0, 0, 0]));
        assert_eq!(first[1], coeffs(5, [1, 0, 0, 1]));
        // everything except the α = γ = 0 block appears exactly once
        assert_eq!(curve_enumeration(f(5)).count(), 625 - 25);
        let last = curve_enumeration(f(5)).last().unwrap();
        assert_eq!(last, coeffs(5, [0, 4, 4, 4]));
    }

    #[test]
    fn budget_exhaustion() {
        // one curve is not enough for some h; a budget of zero never is
        assert_eq!(
            factor(&p(5, &[-1, 0, 1]), 0),
            Err(FactorError::ExhaustedEnumeration { budget: 0 })
        );
    }

    #[test]
    fn witness_iff_fiber_traces_differ_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for q in [7u64, 11, 13] {
            let field = f(q);
            let mut done = 0;
            while done < 25 {
                let r1 = rng.gen_range(0..q);
                let r2 = rng.gen_range(0..q);
                if r1 == r2 {
                    continue;
                }
                let h = &p(q, &[-(r1 as i64), 1]) * &p(q, &[-(r2 as i64), 1]);
                let c = [(); 4].map(|_| field.elem(rng.gen_range(0..q)));
                let Some((t1, t2)) = fiber_traces(&h, c) else { continue };
                if t1 == t2 {
                    continue;
                }
                done += 1;
                let res = factor_with_curve(&h, c).unwrap();
                let mut roots = [field.elem(r1), field.elem(r2)];
                roots.sort_by_key(|r| r.value());
                for fac in &res.factors {
                    assert!(roots.iter().any(|&r| fac.eval(r).is_zero()));
                }
                assert_eq!(&res.factors[0] * &res.factors[1], h);
                assert_eq!(res.witness.element.unitness(), crate::ring::Unitness::NonUnit);
            }
        }
    }

    #[test]
    fn deterministic_repeat() {
        let h = p(11, &[6, 4, 1]); // (z - 2)(z - 5)
        assert_eq!(factor(&h, 64), factor(&h, 64));
    }
}
