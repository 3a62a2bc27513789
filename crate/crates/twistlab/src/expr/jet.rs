//! Order-3 truncated Taylor arithmetic.
//!
//! A [`Jet3`] carries a value together with its first three derivatives with
//! respect to the evaluation parameter. Arithmetic follows the Leibniz rule and
//! composition follows the order-3 Faà di Bruno formula, so derivatives come out
//! exact to machine precision rather than by finite differencing. Third
//! derivatives are needed because torsion consumes them.
//!
//! Jet operations are total in the IEEE sense: they may produce infinities or
//! NaNs for out-of-domain inputs. Domain checking happens in the expression
//! evaluator, which owns the error reporting.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value and derivatives d1, d2, d3 of a scalar function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const fn new(f: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet3 { f, d1, d2, d3 }
    }

    /// Jet of a constant: all derivatives zero.
    pub const fn constant(value: f64) -> Self {
        Jet3::new(value, 0.0, 0.0, 0.0)
    }

    /// Seed jet of the evaluation parameter itself.
    pub const fn variable(t: f64) -> Self {
        Jet3::new(t, 1.0, 0.0, 0.0)
    }

    pub fn is_constant(self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0 && self.d3 == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.f.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }

    /// Chain rule through an outer scalar function with derivatives
    /// `g0, g1, g2, g3` evaluated at `self.f` (order-3 Faà di Bruno).
    pub fn compose(self, g0: f64, g1: f64, g2: f64, g3: f64) -> Self {
        let u1 = self.d1;
        let u2 = self.d2;
        let u3 = self.d3;
        Jet3 {
            f: g0,
            d1: g1 * u1,
            d2: g2 * u1 * u1 + g1 * u2,
            d3: g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3,
        }
    }

    /// Multiplicative inverse 1/self.
    pub fn recip(self) -> Self {
        let u = self.f;
        let u2 = u * u;
        self.compose(1.0 / u, -1.0 / u2, 2.0 / (u2 * u), -6.0 / (u2 * u2))
    }

    /// Integer power by binary exponentiation; negative exponents go through
    /// [`recip`](Self::recip). Any base is allowed.
    pub fn powi(self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Jet3::constant(1.0);
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// The jet of this jet's derivative, shifted down one order. Only the
    /// value and first two derivatives of the result are meaningful; the
    /// third-order slot is unknown and left at zero.
    pub fn derivative(self) -> Self {
        Jet3::new(self.d1, self.d2, self.d3, 0.0)
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, r: Jet3) -> Jet3 {
        Jet3::new(self.f + r.f, self.d1 + r.d1, self.d2 + r.d2, self.d3 + r.d3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, r: Jet3) -> Jet3 {
        Jet3::new(self.f - r.f, self.d1 - r.d1, self.d2 - r.d2, self.d3 - r.d3)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.f, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, r: Jet3) -> Jet3 {
        Jet3 {
            f: self.f * r.f,
            d1: self.d1 * r.f + self.f * r.d1,
            d2: self.d2 * r.f + 2.0 * self.d1 * r.d1 + self.f * r.d2,
            d3: self.d3 * r.f + 3.0 * self.d2 * r.d1 + 3.0 * self.d1 * r.d2 + self.f * r.d3,
        }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    fn div(self, r: Jet3) -> Jet3 {
        self * r.recip()
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, k: f64) -> Jet3 {
        Jet3::new(self.f * k, self.d1 * k, self.d2 * k, self.d3 * k)
    }
}
