//! Sparse multivariate polynomials over a generic coefficient ring.
//!
//! Monomials are exponent vectors keyed in a `BTreeMap`; zero coefficients are
//! never stored. The connection matrices handled here are extremely sparse, so
//! a monomial map wins over any dense layout.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{DifferentialRing, Ring};

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct Poly<C: Clone + PartialEq> {
    /// exponent vector -> nonzero coefficient
    pub terms: BTreeMap<Monomial, C>,
}

impl<C: Clone + PartialEq + fmt::Debug> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.terms)
    }
}

impl<C: Clone + PartialEq> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self, nvars: usize) -> Option<&C> {
        self.terms.get(&vec![0; nvars])
    }

    /// Total degree, or None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[var]).max()
    }
}

/// Polynomial ring `C[x_0, ..., x_{n-1}]` with named variables.
#[derive(Clone)]
pub struct PolyRing<R: Ring> {
    pub coeff_ring: R,
    pub vars: Arc<Vec<String>>,
}

impl<R: Ring> fmt::Debug for PolyRing<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyRing({:?})", self.vars)
    }
}

impl<R: Ring> PolyRing<R> {
    pub fn new(coeff_ring: R, vars: &[&str]) -> Self {
        PolyRing {
            coeff_ring,
            vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn var(&self, idx: usize) -> Poly<R::Elem> {
        assert!(idx < self.vars.len());
        let mut m = vec![0u32; self.vars.len()];
        m[idx] = 1;
        self.monomial(m, self.coeff_ring.one())
    }

    pub fn var_by_name(&self, name: &str) -> Result<Poly<R::Elem>> {
        Ok(self.var(self.var_index(name)?))
    }

    pub fn monomial(&self, m: Monomial, c: R::Elem) -> Poly<R::Elem> {
        let mut terms = BTreeMap::new();
        if !self.coeff_ring.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.monomial(vec![0; self.vars.len()], c)
    }

    /// Coefficient of `x_var^k`, as a polynomial in the remaining variables
    /// (the slot of `var` is zeroed in the result's monomials).
    pub fn coefficient_of(&self, p: &Poly<R::Elem>, var: usize, k: u32) -> Poly<R::Elem> {
        let mut terms = BTreeMap::new();
        for (m, c) in &p.terms {
            if m[var] == k {
                let mut m2 = m.clone();
                m2[var] = 0;
                terms.insert(m2, c.clone());
            }
        }
        Poly { terms }
    }

    /// Coefficient of the full monomial `m` (exponent vector over all vars).
    pub fn coefficient_at(&self, p: &Poly<R::Elem>, m: &[u32]) -> R::Elem {
        p.terms.get(m).cloned().unwrap_or_else(|| self.coeff_ring.zero())
    }

    /// Substitutes ring elements for the variables (generic target ring).
    pub fn subst_into<T: Ring>(
        &self,
        p: &Poly<R::Elem>,
        target: &T,
        lift: &dyn Fn(&R::Elem) -> T::Elem,
        images: &[T::Elem],
    ) -> T::Elem {
        assert_eq!(images.len(), self.vars.len());
        let mut acc = target.zero();
        for (m, c) in &p.terms {
            let mut term = lift(c);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = target.mul(&term, &target.pow(&images[i], e));
                }
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    /// Maps coefficients into another coefficient ring, keeping monomials.
    pub fn map_coeffs<S: Ring>(
        &self,
        p: &Poly<R::Elem>,
        target: &PolyRing<S>,
        f: &dyn Fn(&R::Elem) -> S::Elem,
    ) -> Poly<S::Elem> {
        assert_eq!(self.vars.len(), target.vars.len());
        let mut terms = BTreeMap::new();
        for (m, c) in &p.terms {
            let c2 = f(c);
            if !target.coeff_ring.is_zero(&c2) {
                terms.insert(m.clone(), c2);
            }
        }
        Poly { terms }
    }

    /// Exact multivariate division; errors when `b` does not divide `a`.
    fn exact_div(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        if b.is_zero() {
            return Err(Error::DivisionByNonUnit("polynomial division by zero".into()));
        }
        // lead term of b in the BTreeMap (lex) order
        let (bm, bc) = b.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = a.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.terms.iter().next_back().unwrap();
                (m.clone(), c.clone())
            };
            if rm.len() != bm.len() || rm.iter().zip(&bm).any(|(r, b)| r < b) {
                return Err(Error::DivisionByNonUnit(
                    "polynomial division leaves a remainder".into(),
                ));
            }
            let qm: Monomial = rm.iter().zip(&bm).map(|(r, b)| r - b).collect();
            let qc = self.coeff_ring.try_div(&rc, &bc)?;
            let t = self.monomial(qm, qc);
            quot = self.add(&quot, &t);
            rem = self.sub(&rem, &self.mul(&t, b));
        }
        Ok(quot)
    }

    /// True when `b` divides `a` exactly.
    pub fn divides(&self, b: &Poly<R::Elem>, a: &Poly<R::Elem>) -> bool {
        self.exact_div(a, b).is_ok()
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.coeff_ring.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        let terms = a
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.coeff_ring.neg(c)))
            .collect();
        Poly { terms }
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            match terms.get_mut(m) {
                Some(existing) => {
                    let s = self.coeff_ring.add(existing, c);
                    if self.coeff_ring.is_zero(&s) {
                        terms.remove(m);
                    } else {
                        *existing = s;
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Poly { terms }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = self.coeff_ring.mul(ca, cb);
                match terms.get_mut(&m) {
                    Some(existing) => {
                        let s = self.coeff_ring.add(existing, &c);
                        if self.coeff_ring.is_zero(&s) {
                            terms.remove(&m);
                        } else {
                            *existing = s;
                        }
                    }
                    None => {
                        if !self.coeff_ring.is_zero(&c) {
                            terms.insert(m, c);
                        }
                    }
                }
            }
        }
        Poly { terms }
    }

    fn from_rational(&self, q: &Rational) -> Self::Elem {
        self.constant(self.coeff_ring.from_rational(q))
    }

    fn try_div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.exact_div(a, b)
    }

    fn display(&self, a: &Self::Elem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in a.terms.iter().rev() {
            let mut factors = Vec::new();
            let coeff = self.coeff_ring.display(c);
            let trivial_coeff = coeff == "1" && m.iter().any(|&e| e > 0);
            if !trivial_coeff {
                if coeff.contains(['+', '-']) && !coeff.starts_with('-') || coeff[1..].contains(['+', '-']) {
                    factors.push(format!("({coeff})"));
                } else {
                    factors.push(coeff);
                }
            }
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    factors.push(self.vars[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars[i], e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl<R: Ring> DifferentialRing for PolyRing<R> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn var_name(&self, idx: usize) -> &str {
        &self.vars[idx]
    }

    fn partial(&self, a: &Self::Elem, var: usize) -> Result<Self::Elem> {
        if var >= self.vars.len() {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &a.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] = e - 1;
            let c2 = self
                .coeff_ring
                .mul(c, &self.coeff_ring.from_rational(&Rational::from(e)));
            if !self.coeff_ring.is_zero(&c2) {
                terms.insert(m2, c2);
            }
        }
        Ok(Poly { terms })
    }

    fn log_derivative(&self, a: &Self::Elem, var: usize) -> Result<Self::Elem> {
        if var >= self.vars.len() {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &a.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let c2 = self
                .coeff_ring
                .mul(c, &self.coeff_ring.from_rational(&Rational::from(e)));
            if !self.coeff_ring.is_zero(&c2) {
                terms.insert(m.clone(), c2);
            }
        }
        Ok(Poly { terms })
    }
}

/// Convenience alias: rational-coefficient polynomials.
pub type QPolyRing = PolyRing<crate::ring::RationalField>;
pub type QPoly = Poly<Rational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RationalField;

    fn ring() -> QPolyRing {
        PolyRing::new(RationalField, &["q1", "q2"])
    }

    #[test]
    fn derivative_of_monomial() {
        let r = ring();
        // d(q1^2 q2)/dq1 = 2 q1 q2
        let p = r.mul(&r.mul(&r.var(0), &r.var(0)), &r.var(1));
        let d = r.partial(&p, 0).unwrap();
        let expected = r.mul(
            &r.from_rational(&Rational::from(2)),
            &r.mul(&r.var(0), &r.var(1)),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn exact_division() {
        let r = ring();
        // (q1^2 - q2^2) / (q1 - q2) = q1 + q2
        let a = r.sub(&r.mul(&r.var(0), &r.var(0)), &r.mul(&r.var(1), &r.var(1)));
        let b = r.sub(&r.var(0), &r.var(1));
        let q = r.try_div(&a, &b).unwrap();
        assert_eq!(q, r.add(&r.var(0), &r.var(1)));
        assert!(r.try_div(&r.one(), &b).is_err());
    }

    #[test]
    fn display_is_readable() {
        let r = ring();
        let p = r.add(
            &r.mul(&r.from_rational(&Rational::new(-2, 1)), &r.var(1)),
            &r.one(),
        );
        assert_eq!(r.display(&p), "-2*q2 + 1");
    }
}
