//! Polynomial rings localized at a fixed finite set of prime denominators.
//!
//! An element is `num / prod primes[i]^exps[i]`. Division is defined exactly
//! when the divisor's numerator is a unit of the localization, i.e. a constant
//! times a product of the declared primes. Equality is decided by
//! cross-multiplication of reduced forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::rational::Rational;
use crate::ring::{DifferentialRing, Ring, RationalField};

pub type QPoly = Poly<Rational>;

#[derive(Clone, PartialEq)]
pub struct Frac {
    pub num: QPoly,
    /// exponents on the ring's declared primes
    pub den: Vec<u32>,
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frac({:?} / {:?})", self.num, self.den)
    }
}

/// `Q[vars]` localized at `primes`.
#[derive(Clone)]
pub struct LocRing {
    pub poly: PolyRing<RationalField>,
    pub primes: Vec<QPoly>,
    prime_names: Vec<String>,
}

impl fmt::Debug for LocRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocRing({:?}; primes {:?})", self.poly.vars, self.prime_names)
    }
}

impl LocRing {
    pub fn new(vars: &[&str], primes: Vec<(QPoly, &str)>) -> Self {
        let poly = PolyRing::new(RationalField, vars);
        let prime_names = primes.iter().map(|(_, n)| n.to_string()).collect();
        LocRing {
            poly,
            primes: primes.into_iter().map(|(p, _)| p).collect(),
            prime_names,
        }
    }

    pub fn from_poly(&self, num: QPoly) -> Frac {
        Frac { num, den: vec![0; self.primes.len()] }
    }

    fn reduce(&self, mut f: Frac) -> Frac {
        if f.num.is_zero() {
            f.den = vec![0; self.primes.len()];
            return f;
        }
        for (i, p) in self.primes.iter().enumerate() {
            while f.den[i] > 0 {
                match self.poly.try_div(&f.num, p) {
                    Ok(q) => {
                        f.num = q;
                        f.den[i] -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
        f
    }

    fn den_poly(&self, exps: &[u32]) -> QPoly {
        let mut acc = self.poly.one();
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                acc = self.poly.mul(&acc, &self.primes[i]);
            }
        }
        acc
    }

    /// Writes `p` as `c * prod primes^e` if it is a unit of the localization.
    fn unit_factor(&self, p: &QPoly) -> Option<(Rational, Vec<u32>)> {
        let mut exps = vec![0u32; self.primes.len()];
        let mut rest = p.clone();
        loop {
            if rest.is_zero() {
                return None;
            }
            if rest.total_degree() == Some(0) {
                let c = rest.terms.values().next().unwrap().clone();
                return Some((c, exps));
            }
            let mut progressed = false;
            for (i, prime) in self.primes.iter().enumerate() {
                if let Ok(q) = self.poly.try_div(&rest, prime) {
                    rest = q;
                    exps[i] += 1;
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return None;
            }
        }
    }

    pub fn is_polynomial(&self, f: &Frac) -> Option<QPoly> {
        let r = self.reduce(f.clone());
        if r.den.iter().all(|&e| e == 0) {
            Some(r.num)
        } else {
            None
        }
    }
}

impl Ring for LocRing {
    type Elem = Frac;

    fn zero(&self) -> Frac {
        self.from_poly(self.poly.zero())
    }

    fn one(&self) -> Frac {
        self.from_poly(self.poly.one())
    }

    fn is_zero(&self, a: &Frac) -> bool {
        a.num.is_zero()
    }

    fn neg(&self, a: &Frac) -> Frac {
        Frac { num: self.poly.neg(&a.num), den: a.den.clone() }
    }

    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        // common denominator: max exponents
        let den: Vec<u32> = a.den.iter().zip(&b.den).map(|(x, y)| *x.max(y)).collect();
        let lift_a: Vec<u32> = den.iter().zip(&a.den).map(|(d, x)| d - x).collect();
        let lift_b: Vec<u32> = den.iter().zip(&b.den).map(|(d, x)| d - x).collect();
        let na = self.poly.mul(&a.num, &self.den_poly(&lift_a));
        let nb = self.poly.mul(&b.num, &self.den_poly(&lift_b));
        self.reduce(Frac { num: self.poly.add(&na, &nb), den })
    }

    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        let den: Vec<u32> = a.den.iter().zip(&b.den).map(|(x, y)| x + y).collect();
        self.reduce(Frac { num: self.poly.mul(&a.num, &b.num), den })
    }

    fn from_rational(&self, q: &Rational) -> Frac {
        self.from_poly(self.poly.from_rational(q))
    }

    fn try_div(&self, a: &Frac, b: &Frac) -> Result<Frac> {
        if b.num.is_zero() {
            return Err(Error::DivisionByNonUnit("division by zero".into()));
        }
        // exact polynomial division first, else invert a unit numerator
        if let Ok(q) = self.poly.try_div(&a.num, &b.num) {
            // b's denominator moves to the numerator side
            let num = self.poly.mul(&q, &self.den_poly(&b.den));
            return Ok(self.reduce(Frac { num, den: a.den.clone() }));
        }
        let (c, exps) = self.unit_factor(&b.num).ok_or_else(|| {
            Error::DivisionByNonUnit(format!(
                "`{}` is not a unit of the localization",
                self.poly.display(&b.num)
            ))
        })?;
        let c_inv = c.recip()?;
        let num = self.poly.mul(
            &self.poly.mul(&a.num, &self.den_poly(&b.den)),
            &self.poly.from_rational(&c_inv),
        );
        let den: Vec<u32> = a.den.iter().zip(&exps).map(|(x, y)| x + y).collect();
        Ok(self.reduce(Frac { num, den }))
    }

    fn display(&self, a: &Frac) -> String {
        if a.den.iter().all(|&e| e == 0) {
            self.poly.display(&a.num)
        } else {
            let den = self.den_poly(&a.den);
            format!("({}) / ({})", self.poly.display(&a.num), self.poly.display(&den))
        }
    }
}

impl DifferentialRing for LocRing {
    fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    fn var_name(&self, idx: usize) -> &str {
        self.poly.var_name(idx)
    }

    /// Quotient rule against the explicit prime-power denominator.
    fn partial(&self, a: &Frac, var: usize) -> Result<Frac> {
        let mut result = Frac {
            num: self.poly.partial(&a.num, var)?,
            den: a.den.clone(),
        };
        for (i, &e) in a.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let dp = self.poly.partial(&self.primes[i], var)?;
            if dp.is_zero() {
                continue;
            }
            // -e * num * p'_i / (den * p_i)
            let mut num = self.poly.mul(&a.num, &dp);
            num = self.poly.mul(&num, &self.poly.from_rational(&-&Rational::from(e)));
            let mut den = a.den.clone();
            den[i] += 1;
            result = self.add(&result, &self.reduce(Frac { num, den }));
        }
        Ok(self.reduce(result))
    }

    fn log_derivative(&self, a: &Frac, var: usize) -> Result<Frac> {
        let d = self.partial(a, var)?;
        let x = self.from_poly(self.poly.var(var));
        Ok(self.mul(&x, &d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> LocRing {
        let poly = PolyRing::new(RationalField, &["q1", "q2"]);
        let q1 = poly.var(0);
        let q2 = poly.var(1);
        let p3 = poly.sub(
            &poly.mul(&poly.from_rational(&Rational::from(4)), &q1),
            &poly.one(),
        );
        LocRing::new(&["q1", "q2"], vec![(q1, "q1"), (q2, "q2"), (p3, "4q1-1")])
    }

    #[test]
    fn add_reduces_denominators() {
        let r = ring();
        let q1 = r.from_poly(r.poly.var(0));
        let inv_q1 = r.try_div(&r.one(), &q1).unwrap();
        let prod = r.mul(&q1, &inv_q1);
        assert_eq!(prod, r.one());
        // 1/q1 + (q1-1)/q1 = 1
        let num = r.from_poly(r.poly.sub(&r.poly.var(0), &r.poly.one()));
        let other = r.try_div(&num, &q1).unwrap();
        assert_eq!(r.add(&inv_q1, &other), r.one());
    }

    #[test]
    fn division_by_non_unit_fails() {
        let r = ring();
        let q1_plus_1 = r.from_poly(r.poly.add(&r.poly.var(0), &r.poly.one()));
        assert!(matches!(
            r.try_div(&r.one(), &q1_plus_1),
            Err(Error::DivisionByNonUnit(_))
        ));
    }

    #[test]
    fn derivative_with_quotient_rule() {
        let r = ring();
        // d/dq1 (1/(4q1-1)) = -4/(4q1-1)^2
        let unit = r.try_div(&r.one(), &r.from_poly(r.primes[2].clone())).unwrap();
        let d = r.partial(&unit, 0).unwrap();
        let expected = {
            let num = r.from_poly(r.poly.from_rational(&Rational::from(-4)));
            let den2 = r.mul(
                &r.from_poly(r.primes[2].clone()),
                &r.from_poly(r.primes[2].clone()),
            );
            r.try_div(&num, &den2).unwrap()
        };
        assert_eq!(d, expected);
    }
}
