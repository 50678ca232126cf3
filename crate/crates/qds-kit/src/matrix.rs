//! Dense matrices over an arbitrary ring instance.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::Ring;

#[derive(Clone, PartialEq)]
pub struct Matrix<T: Clone + PartialEq> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Clone + PartialEq + fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn map<U: Clone + PartialEq>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }
}

/// Ring-parameterized matrix operations. Every method checks dimensions.
pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "matrix add dimensions");
    Matrix::from_fn(a.rows, a.cols, |i, j| ring.add(a.at(i, j), b.at(i, j)))
}

pub fn sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "matrix sub dimensions");
    Matrix::from_fn(a.rows, a.cols, |i, j| ring.sub(a.at(i, j), b.at(i, j)))
}

pub fn neg<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|v| ring.neg(v))
}

pub fn scale<R: Ring>(ring: &R, a: &Matrix<R::Elem>, s: &R::Elem) -> Matrix<R::Elem> {
    a.map(|v| ring.mul(v, s))
}

pub fn mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows, "matrix mul dimensions");
    Matrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = ring.zero();
        for k in 0..a.cols {
            acc = ring.add(&acc, &ring.mul(a.at(i, k), b.at(k, j)));
        }
        acc
    })
}

pub fn mul_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len(), "matrix-vector dimensions");
    (0..a.rows)
        .map(|i| {
            let mut acc = ring.zero();
            for k in 0..a.cols {
                acc = ring.add(&acc, &ring.mul(a.at(i, k), &v[k]));
            }
            acc
        })
        .collect()
}

pub fn commutator<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    sub(ring, &mul(ring, a, b), &mul(ring, b, a))
}

pub fn is_zero<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    (0..a.rows).all(|i| (0..a.cols).all(|j| ring.is_zero(a.at(i, j))))
}

pub fn map_entries<R: Ring, S: Ring>(
    a: &Matrix<R::Elem>,
    f: &dyn Fn(&R::Elem) -> S::Elem,
) -> Matrix<S::Elem> {
    a.map(f)
}

/// Gauss-Jordan inverse. A pivot must be invertible in the ring, so over a
/// localized ring this succeeds exactly when elimination stays inside the
/// localization.
pub fn try_inverse<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = identity(ring, n);
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !ring.is_zero(m.at(r, col)) && ring.try_inv(m.at(r, col)).is_ok())
            .ok_or(Error::NotInvertible)?;
        if pivot_row != col {
            for j in 0..n {
                let tmp = m.at(col, j).clone();
                m.set(col, j, m.at(pivot_row, j).clone());
                m.set(pivot_row, j, tmp);
                let tmp = inv.at(col, j).clone();
                inv.set(col, j, inv.at(pivot_row, j).clone());
                inv.set(pivot_row, j, tmp);
            }
        }
        let p_inv = ring.try_inv(m.at(col, col))?;
        for j in 0..n {
            m.set(col, j, ring.mul(m.at(col, j), &p_inv));
            inv.set(col, j, ring.mul(inv.at(col, j), &p_inv));
        }
        for r in 0..n {
            if r == col || ring.is_zero(m.at(r, col)) {
                continue;
            }
            let factor = m.at(r, col).clone();
            for j in 0..n {
                let v = ring.sub(m.at(r, j), &ring.mul(&factor, m.at(col, j)));
                m.set(r, j, v);
                let v = ring.sub(inv.at(r, j), &ring.mul(&factor, inv.at(col, j)));
                inv.set(r, j, v);
            }
        }
    }
    Ok(inv)
}

/// Bareiss fraction-free determinant; the interior divisions are exact in any
/// integral domain, so this works over polynomial rings as well.
pub fn det<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Result<R::Elem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(ring.one());
    }
    let mut m = a.clone();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(m.at(k, k)) {
            let swap = (k + 1..n).find(|&r| !ring.is_zero(m.at(r, k)));
            match swap {
                Some(r) => {
                    for j in 0..n {
                        let tmp = m.at(k, j).clone();
                        m.set(k, j, m.at(r, j).clone());
                        m.set(r, j, tmp);
                    }
                    sign = !sign;
                }
                None => return Ok(ring.zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(
                    &ring.mul(m.at(k, k), m.at(i, j)),
                    &ring.mul(m.at(i, k), m.at(k, j)),
                );
                let v = ring.try_div(&num, &prev)?;
                m.set(i, j, v);
            }
            m.set(i, k, ring.zero());
        }
        prev = m.at(k, k).clone();
    }
    let d = m.at(n - 1, n - 1).clone();
    Ok(if sign { ring.neg(&d) } else { d })
}

/// `exp` of a nilpotent matrix as the finite sum `sum N^k / k!`.
pub fn exp_nilpotent<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("exp of non-square matrix".into()));
    }
    let n = a.rows;
    let mut acc = identity(ring, n);
    let mut power = identity(ring, n);
    let mut factorial = Rational::one();
    for k in 1..=n {
        power = mul(ring, &power, a);
        if is_zero(ring, &power) {
            return Ok(acc);
        }
        factorial = &factorial * &Rational::from(k as i64);
        let coeff = ring.from_rational(&factorial.recip().expect("nonzero factorial"));
        acc = add(ring, &acc, &scale(ring, &power, &coeff));
    }
    // a^n != 0 for an n x n matrix: not nilpotent
    Err(Error::NotNilpotent)
}

/// Rank over a field (every nonzero element invertible); used for Krylov
/// span tests over the rationals.
pub fn rank<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !ring.is_zero(m.at(r, col)));
        let Some(p) = pivot else { continue };
        if p != row {
            for j in 0..cols {
                let tmp = m.at(row, j).clone();
                m.set(row, j, m.at(p, j).clone());
                m.set(p, j, tmp);
            }
        }
        let inv = ring
            .try_inv(m.at(row, col))
            .expect("rank requires field-like ring");
        for j in 0..cols {
            m.set(row, j, ring.mul(m.at(row, j), &inv));
        }
        for r in 0..rows {
            if r != row && !ring.is_zero(m.at(r, col)) {
                let f = m.at(r, col).clone();
                for j in 0..cols {
                    let v = ring.sub(m.at(r, j), &ring.mul(&f, m.at(row, j)));
                    m.set(r, j, v);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

pub fn display<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> String {
    let mut out = String::new();
    for i in 0..a.rows {
        let row: Vec<String> = (0..a.cols).map(|j| ring.display(a.at(i, j))).collect();
        out.push_str(&format!("[{}]\n", row.join(", ")));
    }
    out
}
