//! Schoof's algorithm over F_q and over F_q[z]/(h).
//!
//! For each small prime l the trace residue t mod l is found by testing the
//! Frobenius relation φ² + [k] = [τ]φ (k = q mod l) on the whole l-torsion.
//! Points are handled symbolically in the algebra
//!
//!   S = R[x, y] / (f_l(x), y² − x³ − Ax − B),
//!
//! where an element vanishes exactly when it vanishes at every nonzero
//! l-torsion point. Each branch is therefore an identity test in S. Over the
//! split ring R ≅ F_q × F_q an identity holds in one component and fails in
//! the other precisely when the two fiber curves disagree on that branch, and
//! the coefficient that shows it is a non-unit: that coefficient is returned
//! as the witness.
//!
//! Points in S use projective coordinates and the complete addition law of
//! Renes, Costello and Batina, which never divides and is exact on the
//! odd-order group E[l].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bigmod::{is_prime, within_hasse, FieldElement};
use crate::curve::Curve;
use crate::divpoly::{BiPoly, DivisionPolynomials};
use crate::poly::{NonUnitWitness, Poly, PolyModulus, WitnessLocation};
use crate::qring::RingElement;
use crate::ring::{RingElem, Unitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchoofError {
    #[error("product of moduli {modulus} does not exceed 4 sqrt({q})")]
    InsufficientModulus { modulus: BigInt, q: u64 },
    #[error("moduli are not pairwise coprime")]
    ModuliNotCoprime,
    #[error("residues admit no trace in the Hasse window")]
    InconsistentResidues,
    #[error("no candidate trace residue modulo {l} satisfied the Frobenius relation")]
    NoTraceFound { l: u64 },
}

/// t ≡ tau (mod l), with tau in (−l/2, l/2].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceResidue {
    pub l: u64,
    pub tau: i64,
}

/// One decision of the per-prime search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub l: u64,
    /// The candidate tested; for an accepted candidate, the signed residue.
    pub tau: i64,
    pub accepted: bool,
    /// Degree of gcd(H, f_l) for the polynomial H of the test (field runs
    /// only). For l = 2 this is deg gcd(x^q − x, x³ + Ax + B).
    pub gcd_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchoofReport {
    pub q: u64,
    pub l_max: u64,
    pub residues: Vec<TraceResidue>,
    pub t: BigInt,
    pub count: BigInt,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchoofOutcome<R> {
    Counted(SchoofReport),
    /// A non-unit surfaced while computing t mod `l`.
    Witness { witness: NonUnitWitness<R>, l: u64 },
}

pub type RingOutcome = SchoofOutcome<RingElement>;

/// Result of the search at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residue<R> {
    Found(TraceResidue),
    Witness(NonUnitWitness<R>),
}

/// The smallest prime l_max with (∏_{l ≤ l_max} l)² > 16q, and the primes.
pub fn compute_lmax(q: u64) -> (u64, Vec<u64>) {
    let bound = BigUint::from(q) * 16u32;
    let mut product = BigUint::one();
    let mut primes = Vec::new();
    let mut l = 2u64;
    loop {
        if is_prime(l) {
            product *= l;
            primes.push(l);
            if &product * &product > bound {
                return (l, primes);
            }
        }
        l += 1;
    }
}

/// Chinese remaindering of the residues, lifted to the centered window.
pub fn crt_recover(residues: &[TraceResidue], q: u64) -> Result<BigInt, SchoofError> {
    let mut r = BigInt::zero();
    let mut m = BigInt::one();
    for res in residues {
        let l = BigInt::from(res.l);
        let e = m.extended_gcd(&l);
        if !e.gcd.is_one() {
            return Err(SchoofError::ModuliNotCoprime);
        }
        // x = r + m·((tau − r)·m⁻¹ mod l)
        let step = ((BigInt::from(res.tau) - &r) * &e.x).mod_floor(&l);
        r += &m * step;
        m *= &l;
        r = r.mod_floor(&m);
    }
    if &m * &m <= BigInt::from(q) * 16 {
        return Err(SchoofError::InsufficientModulus { modulus: m, q });
    }
    let t = if &r * 2 <= m { r } else { r - &m };
    if within_hasse(&t, q) {
        Ok(t)
    } else {
        Err(SchoofError::InconsistentResidues)
    }
}

/// Outcome of an identity test over R.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ZeroTest<R> {
    Zero,
    Nonzero,
    /// Zero in exactly one component of R; carries a coefficient showing it.
    Split(R),
}

/// Decides whether a coefficient vector is zero in each component of R.
///
/// Over a field a vector is zero or not. Over the split ring each nonzero
/// non-unit vanishes in exactly one component; two such coefficients with
/// product zero vanish in different components, so the vector is nonzero in
/// both.
pub(crate) fn classify<R: RingElem>(coeffs: impl IntoIterator<Item = R>) -> ZeroTest<R> {
    let mut non_units = Vec::new();
    for c in coeffs {
        match c.unitness() {
            Unitness::Zero => {}
            Unitness::Unit => return ZeroTest::Nonzero,
            Unitness::NonUnit => non_units.push(c),
        }
    }
    let Some(&first) = non_units.first() else {
        return ZeroTest::Zero;
    };
    if non_units[1..].iter().any(|&c| (first * c).is_zero()) {
        ZeroTest::Nonzero
    } else {
        ZeroTest::Split(first)
    }
}

fn witness<R: RingElem>(c: R) -> NonUnitWitness<R> {
    NonUnitWitness::new(c, WitnessLocation::ZeroTest)
}

fn bi_coeffs<'a, R: RingElem>(p: &'a BiPoly<R>) -> impl Iterator<Item = R> + 'a {
    p.even.coeffs().iter().chain(p.odd.coeffs()).copied()
}

/// Arithmetic on projective coordinates.
pub(crate) trait Coords {
    type E: Clone;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Proj<E> {
    pub x: E,
    pub y: E,
    pub z: E,
}

/// Complete addition on y² = x³ + ax + b (`b3` = 3b).
pub(crate) fn complete_add<C: Coords>(
    c: &C,
    a: &C::E,
    b3: &C::E,
    p: &Proj<C::E>,
    q: &Proj<C::E>,
) -> Proj<C::E> {
    let (x1, y1, z1) = (&p.x, &p.y, &p.z);
    let (x2, y2, z2) = (&q.x, &q.y, &q.z);
    let t0 = c.mul(x1, x2);
    let t1 = c.mul(y1, y2);
    let t2 = c.mul(z1, z2);
    let t3 = c.sub(
        &c.mul(&c.add(x1, y1), &c.add(x2, y2)),
        &c.add(&t0, &t1),
    );
    let t4 = c.sub(
        &c.mul(&c.add(x1, z1), &c.add(x2, z2)),
        &c.add(&t0, &t2),
    );
    let t5 = c.sub(
        &c.mul(&c.add(y1, z1), &c.add(y2, z2)),
        &c.add(&t1, &t2),
    );
    let z3 = c.add(&c.mul(b3, &t2), &c.mul(a, &t4));
    let x3 = c.sub(&t1, &z3);
    let z3 = c.add(&t1, &z3);
    let y3 = c.mul(&x3, &z3);
    let t1 = c.add(&c.add(&t0, &t0), &t0);
    let at2 = c.mul(a, &t2);
    let t4 = c.mul(b3, &t4);
    let t1 = c.add(&t1, &at2);
    let t2 = c.mul(a, &c.sub(&t0, &at2));
    let t4 = c.add(&t4, &t2);
    let y3 = c.add(&y3, &c.mul(&t1, &t4));
    let x3 = c.sub(&c.mul(&t3, &x3), &c.mul(&t5, &t4));
    let z3 = c.add(&c.mul(&t5, &z3), &c.mul(&t3, &t1));
    Proj {
        x: x3,
        y: y3,
        z: z3,
    }
}

/// Plain ring elements as coordinates.
#[cfg(test)]
impl<R: RingElem> Coords for std::marker::PhantomData<R> {
    type E = R;
    fn add(&self, a: &R, b: &R) -> R {
        *a + *b
    }
    fn sub(&self, a: &R, b: &R) -> R {
        *a - *b
    }
    fn mul(&self, a: &R, b: &R) -> R {
        *a * *b
    }
}

/// R[x, y] / (f_l, y² − g).
struct TorsionAlgebra<R> {
    modulus: PolyModulus<R>,
    g: Poly<R>,
}

impl<R: RingElem> Coords for TorsionAlgebra<R> {
    type E = BiPoly<R>;
    fn add(&self, a: &BiPoly<R>, b: &BiPoly<R>) -> BiPoly<R> {
        a.add(b)
    }
    fn sub(&self, a: &BiPoly<R>, b: &BiPoly<R>) -> BiPoly<R> {
        a.sub(b)
    }
    fn mul(&self, a: &BiPoly<R>, b: &BiPoly<R>) -> BiPoly<R> {
        self.reduce(&a.mul(b, &self.g))
    }
}

impl<R: RingElem> TorsionAlgebra<R> {
    fn reduce(&self, p: &BiPoly<R>) -> BiPoly<R> {
        BiPoly::new(self.modulus.reduce(&p.even), self.modulus.reduce(&p.odd))
    }

    fn constant(&self, c: R) -> BiPoly<R> {
        BiPoly::from_x(Poly::constant(c))
    }

    /// [k]P for the generic l-torsion point P = (x, y), from ψ_{k−2..k+2}:
    /// X = 4y·ψ_k·θ_k, Y = ψ_{k+2}ψ_{k−1}² − ψ_{k−2}ψ_{k+1}², Z = 4y·ψ_k³,
    /// with θ_k = x·ψ_k² − ψ_{k−1}ψ_{k+1}.
    fn multiple(&self, dp: &DivisionPolynomials<R>, k: i64, unit: R) -> Proj<BiPoly<R>> {
        let psi = |i: i64| self.reduce(&dp.psi_signed(i));
        let (pm2, pm1, p0, pp1, pp2) = (psi(k - 2), psi(k - 1), psi(k), psi(k + 1), psi(k + 2));
        let four_y = BiPoly::from_y(Poly::constant(unit.from_i64_like(4)));
        let x = BiPoly::from_x(self.modulus.x());
        let p0_sq = self.mul(&p0, &p0);
        let theta = self.sub(&self.mul(&x, &p0_sq), &self.mul(&pm1, &pp1));
        let four_y_p0 = self.mul(&four_y, &p0);
        Proj {
            x: self.mul(&four_y_p0, &theta),
            y: self.sub(
                &self.mul(&pp2, &self.mul(&pm1, &pm1)),
                &self.mul(&pm2, &self.mul(&pp1, &pp1)),
            ),
            z: self.mul(&four_y_p0, &p0_sq),
        }
    }
}

fn gcd_degree<R: RingElem>(a: &Poly<R>, b: &Poly<R>) -> Option<usize> {
    if !R::IS_FIELD {
        return None;
    }
    a.gcd_with_witness(b).ok().and_then(|g| g.degree())
}

fn centered(v: u64, l: u64) -> i64 {
    if v > l / 2 {
        v as i64 - l as i64
    } else {
        v as i64
    }
}

/// t mod 2. The trace is even exactly when x³ + Ax + B has a root in F_q,
/// i.e. when its discriminant is a non-square (one root) or it splits
/// completely (x^q ≡ x modulo the cubic). Both conditions are evaluated as
/// 0/1-valued ring elements so that over F_q[z]/(h) each component decides
/// its own fiber.
pub fn t_mod_2<R: RingElem>(curve: &Curve<R>, trace: &mut Vec<TraceEvent>) -> Residue<R> {
    let (a, b) = (curve.a(), curve.b());
    let one = a.one_like();
    let q = a.characteristic();
    let half = BigUint::from((q - 1) / 2);
    let inv2 = one.from_i64_like(2).try_inv().expect("2 is a unit");
    let cubic = Poly::new(vec![b, a, one.zero_like(), one]);
    let disc = -curve.discriminant();
    let non_square = (one - disc.pow(&half)) * inv2;

    let m = PolyModulus::new(cubic.clone()).expect("monic cubic");
    let x = m.x();
    let xq = m.pow(&x, &BigUint::from(q));
    let r = &xq - &x;
    let q_minus_1 = BigUint::from(q - 1);
    let splits = (0..3).fold(one, |acc, i| {
        let c = r.coeff(i).unwrap_or(one.zero_like());
        acc * (one - c.pow(&q_minus_1))
    });
    let even = non_square + splits;

    let gcd_deg = gcd_degree(&r, &cubic);
    let tau = match even.unitness() {
        Unitness::Unit => 0,
        Unitness::Zero => 1,
        Unitness::NonUnit => return Residue::Witness(witness(even)),
    };
    trace.push(TraceEvent {
        l: 2,
        tau,
        accepted: true,
        gcd_degree: gcd_deg,
    });
    Residue::Found(TraceResidue { l: 2, tau })
}

/// t mod q via the Hasse invariant: t ≡ the coefficient of x^{q−1} in
/// (x³ + Ax + B)^{(q−1)/2}. Used when q itself is among the small primes.
fn t_mod_char<R: RingElem>(dp: &DivisionPolynomials<R>, trace: &mut Vec<TraceEvent>) -> Residue<R> {
    let g = dp.g();
    let one = dp.curve().a().one_like();
    let q = one.characteristic();
    let mut power = Poly::constant(one);
    for _ in 0..(q - 1) / 2 {
        power = &power * g;
    }
    let hasse = power.coeff(q as usize - 1).unwrap_or(one.zero_like());
    for c in 0..q {
        let tau = centered(c, q);
        match classify([hasse - one.from_i64_like(c as i64)]) {
            ZeroTest::Zero => {
                trace.push(TraceEvent {
                    l: q,
                    tau,
                    accepted: true,
                    gcd_degree: None,
                });
                return Residue::Found(TraceResidue { l: q, tau });
            }
            ZeroTest::Split(w) => return Residue::Witness(witness(w)),
            ZeroTest::Nonzero => {}
        }
    }
    unreachable!("the Hasse invariant equals one of the residues")
}

/// t mod l for an odd prime l.
pub fn t_mod_l<R: RingElem>(
    dp: &DivisionPolynomials<R>,
    l: u64,
    trace: &mut Vec<TraceEvent>,
) -> Result<Residue<R>, SchoofError> {
    let curve = dp.curve();
    let one = curve.a().one_like();
    let q = one.characteristic();
    assert!(l % 2 == 1 && is_prime(l), "l must be an odd prime");
    if l == q {
        return Ok(t_mod_char(dp, trace));
    }
    let fl = dp.f(l as usize);
    let modulus = match PolyModulus::new(fl.clone()) {
        Ok(m) => m,
        // the leading coefficient of f_l is l, a unit whenever l ≠ q
        Err(e) => unreachable!("f_l has a unit leading coefficient: {e:?}"),
    };
    let g = modulus.reduce(dp.g());
    let alg = TorsionAlgebra { modulus, g };
    let qb = BigUint::from(q);
    let k = (q % l) as i64;

    // Frobenius images: φ(x, y) = (x^q, y·s) with s = g^{(q−1)/2}, and
    // φ²(x, y) = (x^{q²}, y·s·s^q).
    let x = alg.modulus.x();
    let xq = alg.modulus.pow(&x, &qb);
    let s = alg.modulus.pow(&alg.g, &BigUint::from((q - 1) / 2));
    let xq2 = alg.modulus.pow(&xq, &qb);
    let sq = alg.modulus.pow(&s, &qb);
    let unit = alg.constant(one);
    let phi = Proj {
        x: BiPoly::from_x(xq),
        y: BiPoly::from_y(s.clone()),
        z: unit.clone(),
    };
    let phi2 = Proj {
        x: BiPoly::from_x(xq2.clone()),
        y: BiPoly::from_y(alg.modulus.mul(&s, &sq)),
        z: unit.clone(),
    };
    let a_e = alg.constant(curve.a());
    let b3_e = alg.constant(curve.b() * one.from_i64_like(3));
    let kp = alg.multiple(dp, k, one);
    let lhs = complete_add(&alg, &a_e, &b3_e, &phi2, &kp);

    // τ = 0: φ²P + [k]P = O on all of E[l].
    let h0_deg = if R::IS_FIELD {
        let h0 = h_k0(dp, &alg, &xq2, k as usize);
        gcd_degree(&h0, alg.modulus.poly())
    } else {
        None
    };
    match classify(bi_coeffs(&lhs.z)) {
        ZeroTest::Zero => {
            trace.push(TraceEvent {
                l,
                tau: 0,
                accepted: true,
                gcd_degree: h0_deg,
            });
            return Ok(Residue::Found(TraceResidue { l, tau: 0 }));
        }
        ZeroTest::Split(w) => return Ok(Residue::Witness(witness(w))),
        ZeroTest::Nonzero => trace.push(TraceEvent {
            l,
            tau: 0,
            accepted: false,
            gcd_degree: h0_deg,
        }),
    }

    // τ ≥ 1: compare x-coordinates of φ²P + [k]P and [τ]φP, then y for the sign.
    let mut rhs = Proj {
        x: BiPoly::zero(),
        y: unit.clone(),
        z: BiPoly::zero(),
    };
    for tau in 1..=(l as i64 - 1) / 2 {
        rhs = complete_add(&alg, &a_e, &b3_e, &rhs, &phi);
        let ex = alg.sub(&alg.mul(&lhs.x, &rhs.z), &alg.mul(&rhs.x, &lhs.z));
        let h_deg = if R::IS_FIELD {
            // H = a² − g·b² for ex = a + y·b
            let h = alg.modulus.reduce(
                &(&ex.even.square() - &(&alg.g * &ex.odd.square())),
            );
            gcd_degree(&h, alg.modulus.poly())
        } else {
            None
        };
        match classify(bi_coeffs(&ex)) {
            ZeroTest::Nonzero => {
                trace.push(TraceEvent {
                    l,
                    tau,
                    accepted: false,
                    gcd_degree: h_deg,
                });
                continue;
            }
            ZeroTest::Split(w) => return Ok(Residue::Witness(witness(w))),
            ZeroTest::Zero => {}
        }
        let ey = alg.sub(&alg.mul(&lhs.y, &rhs.z), &alg.mul(&rhs.y, &lhs.z));
        let signed = match classify(bi_coeffs(&ey)) {
            ZeroTest::Zero => tau,
            ZeroTest::Nonzero => -tau,
            ZeroTest::Split(w) => return Ok(Residue::Witness(witness(w))),
        };
        trace.push(TraceEvent {
            l,
            tau: signed,
            accepted: true,
            gcd_degree: h_deg,
        });
        return Ok(Residue::Found(TraceResidue { l, tau: signed }));
    }
    Err(SchoofError::NoTraceFound { l })
}

/// The cleared-denominator polynomial whose roots are the x with
/// x^{q²} = x([k]P):
/// (x^{q²} − x)·f_k² + 4g·f_{k−1}f_{k+1} for odd k, and
/// 4g·(x^{q²} − x)·f_k² + f_{k−1}f_{k+1} for even k.
fn h_k0<R: RingElem>(
    dp: &DivisionPolynomials<R>,
    alg: &TorsionAlgebra<R>,
    xq2: &Poly<R>,
    k: usize,
) -> Poly<R> {
    let m = &alg.modulus;
    let one = dp.curve().a().one_like();
    let four_g = alg.g.scale(one.from_i64_like(4));
    let diff = xq2 - &m.x();
    let fk2 = m.reduce(&dp.f(k).square());
    let f_prev = if k == 0 { Poly::constant(-one) } else { dp.f(k - 1) };
    let side = m.mul(&m.reduce(&f_prev), &m.reduce(&dp.f(k + 1)));
    if k % 2 == 1 {
        &m.mul(&diff, &fk2) + &m.mul(&four_g, &side)
    } else {
        &m.mul(&m.mul(&four_g, &diff), &fk2) + &side
    }
}

/// Runs the per-prime search over every prime up to l_max and recombines.
pub fn schoof<R: RingElem>(curve: &Curve<R>) -> Result<SchoofOutcome<R>, SchoofError> {
    let q = curve.a().characteristic();
    let (l_max, primes) = compute_lmax(q);
    let mut trace = Vec::new();
    let mut residues = Vec::with_capacity(primes.len());
    let dp = DivisionPolynomials::new(*curve);
    for &l in &primes {
        let res = if l == 2 {
            t_mod_2(curve, &mut trace)
        } else {
            t_mod_l(&dp, l, &mut trace)?
        };
        match res {
            Residue::Found(r) => residues.push(r),
            Residue::Witness(witness) => return Ok(SchoofOutcome::Witness { witness, l }),
        }
    }
    let t = crt_recover(&residues, q)?;
    let count = BigInt::from(q) + 1 - &t;
    Ok(SchoofOutcome::Counted(SchoofReport {
        q,
        l_max,
        residues,
        t,
        count,
        trace,
    }))
}

/// Point count of a curve over F_q.
pub fn schoof_count(curve: &Curve<FieldElement>) -> Result<SchoofReport, SchoofError> {
    match schoof(curve)? {
        SchoofOutcome::Counted(report) => Ok(report),
        SchoofOutcome::Witness { .. } => unreachable!("a field has no non-units"),
    }
}

/// Runs the same computation with coefficients in F_q[z]/(h).
pub fn schoof_over_ring(curve: &Curve<RingElement>) -> Result<RingOutcome, SchoofError> {
    schoof(curve)
}

/// The count as a `u64`, for callers that know it fits.
pub fn count_u64(report: &SchoofReport) -> u64 {
    debug_assert!(report.count.is_positive());
    report.count.to_u64().expect("count fits in u64")
}
