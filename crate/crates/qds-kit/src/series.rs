//! Truncated power series with matrix (or scalar) coefficients.
//!
//! The truncation order is part of the value: arithmetic never produces or
//! inspects coefficients at or beyond it, and two series compare equal iff
//! all retained coefficients agree.

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::ring::Ring;

/// `sum_{d < order} A_d x^d` with matrix coefficients over `R`.
#[derive(Clone, Debug)]
pub struct MatrixSeries<R: Ring> {
    pub coeffs: Vec<Matrix<R::Elem>>,
    pub order: usize,
}

impl<R: Ring> PartialEq for MatrixSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl<R: Ring> MatrixSeries<R> {
    pub fn new(ring: &R, mut coeffs: Vec<Matrix<R::Elem>>, order: usize, dim: usize) -> Self {
        coeffs.truncate(order);
        while coeffs.len() < order {
            coeffs.push(matrix::zeros(ring, dim, dim));
        }
        MatrixSeries { coeffs, order }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.first().map_or(0, |m| m.rows)
    }

    pub fn add(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "series order mismatch");
        MatrixSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| matrix::add(ring, a, b))
                .collect(),
            order: self.order,
        }
    }

    pub fn mul(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "series order mismatch");
        let dim = self.dim();
        let mut coeffs = vec![matrix::zeros(ring, dim, dim); self.order];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= self.order {
                    break;
                }
                coeffs[i + j] = matrix::add(ring, &coeffs[i + j], &matrix::mul(ring, a, b));
            }
        }
        MatrixSeries { coeffs, order: self.order }
    }

    /// Inverse of a series whose constant term is the identity:
    /// `B_0 = I`, `B_k = -sum_{i=1..k} A_i B_{k-i}`.
    pub fn invert(&self, ring: &R) -> Result<Self> {
        let dim = self.dim();
        let id = matrix::identity(ring, dim);
        if self.order == 0 {
            return Ok(self.clone());
        }
        if self.coeffs[0] != id {
            return Err(Error::NonUnitConstantTerm);
        }
        let mut inv: Vec<Matrix<R::Elem>> = vec![id];
        for k in 1..self.order {
            let mut acc = matrix::zeros(ring, dim, dim);
            for i in 1..=k {
                acc = matrix::add(ring, &acc, &matrix::mul(ring, &self.coeffs[i], &inv[k - i]));
            }
            inv.push(matrix::neg(ring, &acc));
        }
        Ok(MatrixSeries { coeffs: inv, order: self.order })
    }

    pub fn is_identity(&self, ring: &R) -> bool {
        let dim = self.dim();
        let id = matrix::identity(ring, dim);
        self.coeffs
            .iter()
            .enumerate()
            .all(|(d, m)| if d == 0 { *m == id } else { matrix::is_zero(ring, m) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::rational::Rational;
    use crate::ring::RationalField;

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Rational::from).collect())
                .collect(),
        )
    }

    #[test]
    fn invert_identity_plus_nilpotent() {
        // (I + N x)^-1 = I - N x + N^2 x^2 at order 3
        let f = RationalField;
        let n = qm(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        let h = MatrixSeries::new(
            &f,
            vec![matrix::identity(&f, 3), n.clone()],
            3,
            3,
        );
        let inv = h.invert(&f).unwrap();
        assert_eq!(inv.coeffs[1], matrix::neg(&f, &n));
        assert_eq!(inv.coeffs[2], matrix::mul(&f, &n, &n));
        assert!(h.mul(&f, &inv).is_identity(&f));
    }

    #[test]
    fn invert_geometric() {
        // ((1-x) I)^-1 = I (1 + x + x^2 + x^3) at order 4
        let f = RationalField;
        let id = matrix::identity(&f, 2);
        let h = MatrixSeries::new(&f, vec![id.clone(), matrix::neg(&f, &id)], 4, 2);
        let inv = h.invert(&f).unwrap();
        for d in 0..4 {
            assert_eq!(inv.coeffs[d], id);
        }
    }

    #[test]
    fn non_unit_constant_term_is_rejected() {
        let f = RationalField;
        let h = MatrixSeries::new(&f, vec![qm(vec![vec![0, 0], vec![0, 1]])], 2, 2);
        assert_eq!(h.invert(&f).unwrap_err(), Error::NonUnitConstantTerm);
    }

    #[test]
    fn truncation_is_closed() {
        let f = RationalField;
        let id = matrix::identity(&f, 2);
        let h = MatrixSeries::new(&f, vec![id.clone(), id.clone(), id.clone()], 2, 2);
        assert_eq!(h.coeffs.len(), 2);
        let sq = h.mul(&f, &h);
        assert_eq!(sq.coeffs.len(), 2);
    }
}
