//! Ring abstraction: every exact computation in the crate runs against a ring
//! instance, so matrices and series can hold polynomials, localized fractions
//! or algebraic-extension elements without code changes.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::rational::Rational;

pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;

    /// Exact division; errors unless `b` divides `a` in this ring.
    fn try_div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_rational(&Rational::from(v))
    }

    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.try_div(&self.one(), a)
    }

    fn pow(&self, a: &Self::Elem, exp: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Pretty form of an element, used by reports and JSON output.
    fn display(&self, a: &Self::Elem) -> String;
}

/// A ring with named variables and partial derivatives.
pub trait DifferentialRing: Ring {
    fn nvars(&self) -> usize;
    fn var_name(&self, idx: usize) -> &str;

    fn var_index(&self, name: &str) -> Result<usize> {
        (0..self.nvars())
            .find(|&i| self.var_name(i) == name)
            .ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    fn partial(&self, a: &Self::Elem, var: usize) -> Result<Self::Elem>;

    /// Logarithmic derivative `x_var * d/dx_var`.
    fn log_derivative(&self, a: &Self::Elem, var: usize) -> Result<Self::Elem>;
}

/// The field of rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RationalField;

impl Ring for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn try_div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if b.is_zero() {
            return Err(Error::DivisionByNonUnit("rational division by zero".into()));
        }
        Ok(a / b)
    }
    fn display(&self, a: &Rational) -> String {
        a.to_string()
    }
}

/// The field of Gaussian rationals `Q(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct GaussianField;

impl Ring for GaussianField {
    type Elem = GaussianRational;

    fn zero(&self) -> GaussianRational {
        GaussianRational::zero()
    }
    fn one(&self) -> GaussianRational {
        GaussianRational::one()
    }
    fn is_zero(&self, a: &GaussianRational) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &GaussianRational) -> GaussianRational {
        -a
    }
    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a + b
    }
    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a * b
    }
    fn from_rational(&self, q: &Rational) -> GaussianRational {
        GaussianRational::from_rational(q.clone())
    }
    fn try_div(&self, a: &GaussianRational, b: &GaussianRational) -> Result<GaussianRational> {
        Ok(a * &b.recip()?)
    }
    fn display(&self, a: &GaussianRational) -> String {
        a.to_string()
    }
}
