//! Checks that tie the production modules to the brute-force oracles.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schoof_core::bigmod::{FieldElement, PrimeField};
use schoof_core::curve::{extension_counts, Curve};
use schoof_core::divpoly::DivisionPolynomials;
use schoof_core::factorizer::{factor, factor_with_curve, FactorError, Factorization, DEFAULT_BUDGET};
use schoof_core::oracle::{brute_count_over_extension, brute_factor_quadratic, brute_points, BruteFactor};
use schoof_core::poly::Poly;
use schoof_core::qring::QuadraticRing;
use schoof_core::schoof::{compute_lmax, schoof_count};

fn field(q: u64) -> PrimeField {
    PrimeField::new(q).unwrap()
}

/// Traces of the two fiber curves by point enumeration; `None` if a fiber
/// is singular.
fn fiber_traces(h: &Poly<FieldElement>, c: [FieldElement; 4]) -> Option<(i64, i64)> {
    let ring = QuadraticRing::from_poly(h).unwrap();
    let f = ring.field();
    let root = f.elements().find(|&z| h.eval(z).value() == 0).unwrap();
    let a = ring.from_parts(c[1], c[0]);
    let b = ring.from_parts(c[3], c[2]);
    let (a1, a2) = a.split(root).unwrap();
    let (b1, b2) = b.split(root).unwrap();
    let q = f.modulus() as i64;
    let t = |a, b| {
        Curve::new(a, b)
            .ok()
            .map(|c| q + 1 - brute_points(&c).unwrap().len() as i64)
    };
    Some((t(a1, b1)?, t(a2, b2)?))
}

fn split_quadratics(q: u64) -> Vec<Poly<FieldElement>> {
    let f = field(q);
    let mut out = Vec::new();
    for r in 0..q {
        for s in r + 1..q {
            let lin = |v: u64| Poly::new(vec![-f.elem(v), f.one()]);
            out.push(&lin(r) * &lin(s));
        }
    }
    out
}

#[test]
fn schoof_matches_enumeration_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for q in [37u64, 41, 43, 47, 53, 59, 61, 67, 71, 97, 101] {
        for _ in 0..5 {
            let f = field(q);
            let Ok(c) = Curve::new(f.elem(rng.gen_range(0..q)), f.elem(rng.gen_range(0..q))) else {
                continue;
            };
            let report = schoof_count(&c).unwrap();
            assert_eq!(report.count, BigInt::from(brute_points(&c).unwrap().len()), "q={q}");
        }
    }
}

#[test]
fn zeta_counts_match_extension_enumeration() {
    for (q, a, b) in [(5, 0, 1), (7, 1, 3), (11, 2, 7), (13, 5, 1)] {
        let c = Curve::from_i64s(field(q), a, b).unwrap();
        let t = schoof_count(&c).unwrap().t;
        let n = extension_counts(&t, q, 2).unwrap();
        assert_eq!(n[1], BigInt::from(brute_count_over_extension(&c).unwrap()));
    }
}

#[test]
fn factorizer_agrees_with_root_scan() {
    for q in [5u64, 7, 11, 13] {
        for h in split_quadratics(q) {
            let Ok(Factorization::Distinct(r)) = factor(&h, DEFAULT_BUDGET) else {
                panic!("q={q} h={h}")
            };
            let BruteFactor::Roots(r1, r2) = brute_factor_quadratic(&h).unwrap() else {
                panic!()
            };
            let mut found: Vec<u64> = r.factors.iter().map(|p| (-p.coeffs()[0]).value()).collect();
            found.sort();
            assert_eq!(found, vec![r1.value(), r2.value()]);
        }
    }
}

#[test]
fn witness_iff_traces_differ_exhaustive_q5() {
    let f = field(5);
    let (_, primes) = compute_lmax(5);
    for h in split_quadratics(5) {
        let ring = QuadraticRing::from_poly(&h).unwrap();
        for n in 0..625u64 {
            let c = [n / 125, n / 25 % 5, n / 5 % 5, n % 5].map(|v| f.elem(v));
            // smooth fibers give a unit discriminant
            assert!(Curve::from_ring_coeffs(ring, c).is_ok() || fiber_traces(&h, c).is_none());
            let outcome = factor_with_curve(&h, c);
            match fiber_traces(&h, c) {
                None => {
                    // a singular fiber: discriminant is zero or a non-unit
                    if let Ok(r) = &outcome {
                        assert_eq!(r.witness_l, None);
                    } else {
                        assert_eq!(outcome, Err(FactorError::SingularCurve));
                    }
                }
                Some((t1, t2)) => {
                    let differ = primes.iter().any(|&l| (t1 - t2).rem_euclid(l as i64) != 0);
                    match outcome {
                        Ok(r) => {
                            assert!(differ, "h={h} c={c:?}");
                            assert_eq!(&r.factors[0] * &r.factors[1], h);
                        }
                        Err(FactorError::NoSplitFound) => assert!(!differ, "h={h} c={c:?}"),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn torsion_x_coordinates_match_f_m_roots() {
    use schoof_core::oracle::brute_torsion_x_over_extension;
    for q in [5u64, 7, 11] {
        let f = field(q);
        for a in 0..q {
            for b in 0..q {
                let Ok(c) = Curve::new(f.elem(a), f.elem(b)) else { continue };
                let dp = DivisionPolynomials::new(c);
                for m in [3usize, 5] {
                    assert_eq!(dp.f(m).roots_by_scan(), brute_torsion_x_over_extension(&c, m as i64).unwrap());
                }
            }
        }
    }
}
