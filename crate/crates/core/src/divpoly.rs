//! Division polynomials ψ_m, their univariate reductions f_m, and the
//! x-coordinate of the multiplication-by-m map.
//!
//! Bivariate quantities are kept as `even(x) + y·odd(x)` with y² replaced by
//! g(x) = x³ + Ax + B.

use std::sync::Mutex;

use crate::curve::Curve;
use crate::poly::Poly;
use crate::ring::RingElem;

/// `even(x) + y·odd(x)` modulo y² = g(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly<R> {
    pub even: Poly<R>,
    pub odd: Poly<R>,
}

impl<R: RingElem> BiPoly<R> {
    pub fn new(even: Poly<R>, odd: Poly<R>) -> Self {
        Self { even, odd }
    }

    pub fn zero() -> Self {
        Self::new(Poly::zero(), Poly::zero())
    }

    pub fn from_x(p: Poly<R>) -> Self {
        Self::new(p, Poly::zero())
    }

    /// `y·p(x)`.
    pub fn from_y(p: Poly<R>) -> Self {
        Self::new(Poly::zero(), p)
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.even + &other.even, &self.odd + &other.odd)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.even - &other.even, &self.odd - &other.odd)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.even, -&self.odd)
    }

    pub fn scale(&self, c: R) -> Self {
        Self::new(self.even.scale(c), self.odd.scale(c))
    }

    /// Product with y² replaced by `g`.
    pub fn mul(&self, other: &Self, g: &Poly<R>) -> Self {
        let oo = &self.odd * &other.odd;
        Self::new(
            &(&self.even * &other.even) + &(g * &oo),
            &(&self.even * &other.odd) + &(&self.odd * &other.even),
        )
    }
}

/// ψ_m for one curve, memoized by index.
///
/// The table stores F_m with ψ_m = F_m for odd m and ψ_m = y·F_m for even m,
/// so every entry is a polynomial in x and powers of y are folded into g.
pub struct DivisionPolynomials<R> {
    curve: Curve<R>,
    g: Poly<R>,
    table: Mutex<Vec<Poly<R>>>,
}

impl<R: RingElem> DivisionPolynomials<R> {
    pub fn new(curve: Curve<R>) -> Self {
        let (a, b) = (curve.a(), curve.b());
        let c = |n: i64| a.from_i64_like(n);
        let one = c(1);
        let zero = c(0);
        let g = Poly::new(vec![b, a, zero, one]);
        let psi3 = Poly::new(vec![-(a * a), c(12) * b, c(6) * a, zero, c(3)]);
        let psi4 = Poly::new(vec![
            -(c(8) * b * b) - a * a * a,
            -(c(4) * a * b),
            -(c(5) * a * a),
            c(20) * b,
            c(5) * a,
            zero,
            one,
        ])
        .scale(c(4));
        let table = vec![
            Poly::zero(),
            Poly::constant(one),
            Poly::constant(c(2)),
            psi3,
            psi4,
        ];
        Self {
            curve,
            g,
            table: Mutex::new(table),
        }
    }

    pub fn curve(&self) -> &Curve<R> {
        &self.curve
    }

    /// x³ + Ax + B.
    pub fn g(&self) -> &Poly<R> {
        &self.g
    }

    fn unit(&self) -> R {
        self.curve.a().one_like()
    }

    /// F_m, with ψ_m = F_m (m odd) or y·F_m (m even).
    fn reduced(&self, m: usize) -> Poly<R> {
        let mut table = self.table.lock().expect("memo table poisoned");
        while table.len() <= m {
            let n = table.len();
            let next = self.recurrence(&table, n);
            table.push(next);
        }
        table[m].clone()
    }

    /// ψ_m for m ≥ 0.
    pub fn psi(&self, m: usize) -> BiPoly<R> {
        let p = self.reduced(m);
        if m % 2 == 1 {
            BiPoly::from_x(p)
        } else {
            BiPoly::from_y(p)
        }
    }

    /// ψ_m for any integer m, with ψ_{−m} = −ψ_m.
    pub fn psi_signed(&self, m: i64) -> BiPoly<R> {
        if m < 0 {
            self.psi(m.unsigned_abs() as usize).neg()
        } else {
            self.psi(m as usize)
        }
    }

    fn recurrence(&self, t: &[Poly<R>], n: usize) -> Poly<R> {
        let m = n / 2;
        if n % 2 == 1 {
            // ψ_{2m+1} = ψ_{m+2}ψ_m³ − ψ_{m−1}ψ_{m+1}³; the even-index pair
            // carries y⁴ = g²
            let g2 = self.g.square();
            let left = &t[m + 2] * &(&t[m].square() * &t[m]);
            let right = &t[m - 1] * &(&t[m + 1].square() * &t[m + 1]);
            if m.is_multiple_of(2) {
                &(&g2 * &left) - &right
            } else {
                &left - &(&g2 * &right)
            }
        } else {
            // ψ_{2m} = ψ_m(ψ_{m+2}ψ_{m−1}² − ψ_{m−2}ψ_{m+1}²)/(2y); for either
            // parity of m the y factors cancel to leave
            // F_{2m} = F_m(F_{m+2}F_{m−1}² − F_{m−2}F_{m+1}²)/2
            let bracket = &(&t[m + 2] * &t[m - 1].square()) - &(&t[m - 2] * &t[m + 1].square());
            let inv2 = self.unit().from_i64_like(2).try_inv().expect("2 is a unit");
            (&t[m] * &bracket).scale(inv2)
        }
    }

    /// f_m: ψ_m for odd m and ψ_m/(2y) for even m, a polynomial in x.
    pub fn f(&self, m: usize) -> Poly<R> {
        let p = self.reduced(m);
        if m % 2 == 1 {
            p
        } else {
            let inv2 = self.unit().from_i64_like(2).try_inv().expect("2 is a unit");
            p.scale(inv2)
        }
    }

    /// The x-coordinate of [m]P as a ratio of polynomials in x.
    ///
    /// With f_j as above, x([m]P) = x − f_{m−1}f_{m+1}·u / (f_m²·v), where
    /// (u, v) = (4g, 1) for odd m and (1, 4g) for even m. The returned
    /// numerator and denominator clear that fraction.
    pub fn mult_by_m_x(&self, m: usize) -> MultByM<R> {
        assert!(m >= 2, "multiplication map needs m >= 2");
        let four_g = self.g.scale(self.unit().from_i64_like(4));
        let one = Poly::constant(self.unit());
        let (u, v) = if m % 2 == 1 {
            (four_g, one)
        } else {
            (one, four_g)
        };
        let fm2 = self.f(m).square();
        let x = Poly::x(self.unit());
        let denominator = &fm2 * &v;
        let numerator = &(&x * &denominator) - &(&(&self.f(m - 1) * &self.f(m + 1)) * &u);
        MultByM {
            numerator,
            denominator,
            u,
            v,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultByM<R> {
    pub numerator: Poly<R>,
    pub denominator: Poly<R>,
    pub u: Poly<R>,
    pub v: Poly<R>,
}
