//! Quadratic extension of a localized polynomial ring by a square root.
//!
//! Elements are pairs `a + b s` with `s^2` a fixed polynomial (here
//! `1 - 4 q1`); the relation is applied eagerly so words of degree >= 2 in `s`
//! never survive an operation. Division is defined when the norm
//! `a^2 - s^2 b^2` is a unit of the localization.

use std::fmt;

use crate::error::{Error, Result};
use crate::localized::{Frac, LocRing, QPoly};
use crate::poly::PolyRing;
use crate::rational::Rational;
use crate::ring::{DifferentialRing, Ring, RationalField};

#[derive(Clone, PartialEq)]
pub struct ExtElem {
    pub even: Frac,
    pub odd: Frac,
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem({:?} + ({:?})s)", self.even, self.odd)
    }
}

/// `LocRing[s] / (s^2 - sq)`.
#[derive(Clone)]
pub struct ExtRing {
    pub base: LocRing,
    /// the polynomial s^2
    pub s_squared: QPoly,
    pub s_name: String,
}

impl fmt::Debug for ExtRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtRing({:?})[{}]", self.base, self.s_name)
    }
}

impl ExtRing {
    pub fn new(base: LocRing, s_squared: QPoly, s_name: &str) -> Self {
        ExtRing { base, s_squared, s_name: s_name.to_string() }
    }

    /// The ring used throughout section-eleven style computations:
    /// `Q[q1, q2, tau]` localized at `q1, q2, 4q1-1`, with `s^2 = 1 - 4 q1`.
    pub fn f2_ring() -> Self {
        let poly = PolyRing::new(RationalField, &["q1", "q2", "tau"]);
        let q1 = poly.var(0);
        let q2 = poly.var(1);
        let four_q1_minus_1 = poly.sub(
            &poly.mul(&poly.from_rational(&Rational::from(4)), &q1),
            &poly.one(),
        );
        let s_squared = poly.neg(&four_q1_minus_1);
        let base = LocRing::new(
            &["q1", "q2", "tau"],
            vec![(q1, "q1"), (q2, "q2"), (four_q1_minus_1, "4q1-1")],
        );
        ExtRing::new(base, s_squared, "s")
    }

    pub fn from_base(&self, even: Frac) -> ExtElem {
        ExtElem { even, odd: self.base.zero() }
    }

    pub fn s(&self) -> ExtElem {
        ExtElem { even: self.base.zero(), odd: self.base.one() }
    }

    pub fn var(&self, name: &str) -> Result<ExtElem> {
        if name == self.s_name {
            return Ok(self.s());
        }
        let idx = self.base.var_index(name)?;
        Ok(self.from_base(self.base.from_poly(self.base.poly.var(idx))))
    }

    fn s_squared_frac(&self) -> Frac {
        self.base.from_poly(self.s_squared.clone())
    }

    /// `a^2 - s^2 b^2`; multiplicative, detects units.
    pub fn norm(&self, e: &ExtElem) -> Frac {
        let a2 = self.base.mul(&e.even, &e.even);
        let b2 = self.base.mul(&e.odd, &e.odd);
        self.base.sub(&a2, &self.base.mul(&self.s_squared_frac(), &b2))
    }

    pub fn conj_s(&self, e: &ExtElem) -> ExtElem {
        ExtElem { even: e.even.clone(), odd: self.base.neg(&e.odd) }
    }

    /// True when the element has no `s` part and no denominator.
    pub fn as_polynomial(&self, e: &ExtElem) -> Option<QPoly> {
        if !self.base.is_zero(&e.odd) {
            return None;
        }
        self.base.is_polynomial(&e.even)
    }
}

impl Ring for ExtRing {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem { even: self.base.zero(), odd: self.base.zero() }
    }

    fn one(&self) -> ExtElem {
        ExtElem { even: self.base.one(), odd: self.base.zero() }
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        self.base.is_zero(&a.even) && self.base.is_zero(&a.odd)
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem { even: self.base.neg(&a.even), odd: self.base.neg(&a.odd) }
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            even: self.base.add(&a.even, &b.even),
            odd: self.base.add(&a.odd, &b.odd),
        }
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        // (a0 + a1 s)(b0 + b1 s) = a0 b0 + s^2 a1 b1 + (a0 b1 + a1 b0) s
        let even = self.base.add(
            &self.base.mul(&a.even, &b.even),
            &self.base.mul(
                &self.s_squared_frac(),
                &self.base.mul(&a.odd, &b.odd),
            ),
        );
        let odd = self.base.add(
            &self.base.mul(&a.even, &b.odd),
            &self.base.mul(&a.odd, &b.even),
        );
        ExtElem { even, odd }
    }

    fn from_rational(&self, q: &Rational) -> ExtElem {
        self.from_base(self.base.from_rational(q))
    }

    fn try_div(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
        if self.is_zero(b) {
            return Err(Error::DivisionByNonUnit("division by zero".into()));
        }
        let n = self.norm(b);
        let conj = self.conj_s(b);
        let prod = self.mul(a, &conj);
        Ok(ExtElem {
            even: self.base.try_div(&prod.even, &n)?,
            odd: self.base.try_div(&prod.odd, &n)?,
        })
    }

    fn display(&self, a: &ExtElem) -> String {
        match (self.base.is_zero(&a.even), self.base.is_zero(&a.odd)) {
            (_, true) => self.base.display(&a.even),
            (true, false) => format!("({})*{}", self.base.display(&a.odd), self.s_name),
            (false, false) => format!(
                "{} + ({})*{}",
                self.base.display(&a.even),
                self.base.display(&a.odd),
                self.s_name
            ),
        }
    }
}

impl DifferentialRing for ExtRing {
    fn nvars(&self) -> usize {
        self.base.nvars()
    }

    fn var_name(&self, idx: usize) -> &str {
        self.base.var_name(idx)
    }

    /// `d(a + b s) = a' + (b' + b (s^2)'/(2 s^2)) s`, from implicit
    /// differentiation of the defining relation.
    fn partial(&self, a: &ExtElem, var: usize) -> Result<ExtElem> {
        let even = self.base.partial(&a.even, var)?;
        let mut odd = self.base.partial(&a.odd, var)?;
        let dsq = self.base.poly.partial(&self.s_squared, var)?;
        if !dsq.is_zero() {
            let num = self.base.mul(&a.odd, &self.base.from_poly(dsq));
            let den = self.base.mul(
                &self.base.from_rational(&Rational::from(2)),
                &self.s_squared_frac(),
            );
            odd = self.base.add(&odd, &self.base.try_div(&num, &den)?);
        }
        Ok(ExtElem { even, odd })
    }

    fn log_derivative(&self, a: &ExtElem, var: usize) -> Result<ExtElem> {
        let d = self.partial(a, var)?;
        let x = self.var(self.base.var_name(var))?;
        Ok(self.mul(&x, &d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_identity() {
        // (a + b s)(a - b s) = a^2 - (1 - 4 q1) b^2
        let r = ExtRing::f2_ring();
        let a = r.var("q2").unwrap();
        let b = r.add(&r.one(), &r.var("q1").unwrap());
        let e = r.add(&a, &r.mul(&b, &r.s()));
        let prod = r.mul(&e, &r.conj_s(&e));
        assert!(r.base.is_zero(&prod.odd));
        assert_eq!(prod.even, r.norm(&e));
    }

    #[test]
    fn s_squared_applied_eagerly() {
        let r = ExtRing::f2_ring();
        let s2 = r.mul(&r.s(), &r.s());
        assert!(r.base.is_zero(&s2.odd));
        assert_eq!(s2.even, r.base.from_poly(r.s_squared.clone()));
    }

    #[test]
    fn derivative_of_s() {
        // ds/dq1 = -2/s, i.e. d(s^2)/dq1 = -4 exactly
        let r = ExtRing::f2_ring();
        let q1 = r.base.var_index("q1").unwrap();
        let ds = r.partial(&r.s(), q1).unwrap();
        let twice_s_ds = r.mul(&r.mul(&r.from_i64(2), &r.s()), &ds);
        assert_eq!(twice_s_ds, r.from_i64(-4));
        // and -2/s as an element
        let minus_two_over_s = r.try_div(&r.from_i64(-2), &r.s()).unwrap();
        assert_eq!(ds, minus_two_over_s);
    }

    #[test]
    fn inverse_of_one_plus_s_over_two() {
        // ((1+s)/2) ((1-s)/2) = q1, so (1+s)/2 is invertible in the localization
        let r = ExtRing::f2_ring();
        let half = r.from_rational(&Rational::new(1, 2));
        let u = r.mul(&half, &r.add(&r.one(), &r.s()));
        let v = r.try_div(&r.one(), &u).unwrap();
        assert_eq!(r.mul(&u, &v), r.one());
    }
}
