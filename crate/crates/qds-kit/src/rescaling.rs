//! Rescaling constructions: Deligne-twisted graded pieces of a constant
//! connection matrix, the nearby-cycle limit, and the self-duality checks
//! for the two candidate classical limits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::rational::Rational;
use crate::ring::RationalField;
use crate::wps::WeightData;

type QMat = Matrix<Rational>;
const F: RationalField = RationalField;

/// Deligne decomposition and graded limit data of a constant matrix against
/// a spectrum.
#[derive(Clone, Debug)]
pub struct RescalingData {
    pub alpha: Vec<Rational>,
    /// `D = diag(floor(alpha_i))`
    pub twist: Vec<i64>,
    /// graded pieces by exponent `d_col - d_row + 1 in [0, n+1]`
    pub graded: BTreeMap<u32, QMat>,
    /// entries surviving `alpha_row = alpha_col + 1`
    pub psi_limit: QMat,
}

/// Splits `x^{-D} (x A) x^{D}` into graded pieces: entry `(row, col)` carries
/// the exponent `d_col - d_row + 1`, which must lie in `[0, n+1]`.
pub fn deligne_decompose(a0: &QMat, alpha: &[Rational]) -> Result<RescalingData> {
    let mu = alpha.len();
    if a0.rows != mu || a0.cols != mu {
        return Err(Error::DimensionMismatch("matrix size must match spectrum".into()));
    }
    let n = alpha
        .iter()
        .map(|a| a.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    let twist: Vec<i64> = alpha
        .iter()
        .map(|a| a.floor().to_i64().expect("integral part"))
        .collect();
    let mut graded: BTreeMap<u32, QMat> = BTreeMap::new();
    for row in 0..mu {
        for col in 0..mu {
            let v = a0.at(row, col);
            if v.is_zero() {
                continue;
            }
            let e = twist[col] - twist[row] + 1;
            let max = (&n + &Rational::one()).to_i64().unwrap_or(i64::MAX);
            if e < 0 || e > max {
                return Err(Error::ExponentOutOfRange(row, col));
            }
            graded
                .entry(e as u32)
                .or_insert_with(|| matrix::zeros(&F, mu, mu))
                .set(row, col, v.clone());
        }
    }
    // commutation relations [D, A_i] = -(i-1) A_i
    let d_mat = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            Rational::from(twist[i])
        } else {
            Rational::zero()
        }
    });
    for (&e, piece) in &graded {
        let lhs = matrix::commutator(&F, &d_mat, piece);
        let rhs = matrix::scale(&F, piece, &Rational::from(-(e as i64 - 1)));
        if lhs != rhs {
            return Err(Error::Invalid(format!(
                "graded piece {e} violates the twist commutation relation"
            )));
        }
    }
    let psi = psi_limit_matrix(a0, alpha);
    Ok(RescalingData { alpha: alpha.to_vec(), twist, graded, psi_limit: psi })
}

fn psi_limit_matrix(a0: &QMat, alpha: &[Rational]) -> QMat {
    let mu = alpha.len();
    Matrix::from_fn(mu, mu, |row, col| {
        if &alpha[row] - &alpha[col] == Rational::one() {
            a0.at(row, col).clone()
        } else {
            Rational::zero()
        }
    })
}

/// The nearby-cycle limit: keeps exactly the entries with spectrum gap one,
/// and checks `[A_infty, psi A0] = psi A0`.
pub fn psi_limit(a0: &QMat, alpha: &[Rational]) -> Result<QMat> {
    let mu = alpha.len();
    if a0.rows != mu || a0.cols != mu {
        return Err(Error::DimensionMismatch("matrix size must match spectrum".into()));
    }
    let psi = psi_limit_matrix(a0, alpha);
    let a_inf = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            alpha[i].clone()
        } else {
            Rational::zero()
        }
    });
    let comm = matrix::commutator(&F, &a_inf, &psi);
    if comm != psi {
        return Err(Error::Invalid("limit does not satisfy [A_infty, psi A0] = psi A0".into()));
    }
    Ok(psi)
}

/// Verdict of the duality test with an optional witness entry.
#[derive(Clone, Debug)]
pub struct DualityVerdict {
    pub self_adjoint: bool,
    /// `(row, col, lhs, rhs)` for the first failing pair, in the convention
    /// `S(m e_col, e_row') vs S(e_col, m e_row')`
    pub witness: Option<(usize, usize, Rational, Rational)>,
}

/// Self-adjointness of `m` for the limit pairing: `m^T S = S m` entrywise,
/// reported with a witness on failure.
pub fn check_limit_duality(m: &QMat, s: &QMat) -> Result<DualityVerdict> {
    if !m.is_square() || m.rows != s.rows || !s.is_square() {
        return Err(Error::DimensionMismatch("duality test".into()));
    }
    match matrix::det(&F, s) {
        Ok(d) if !d.is_zero() => {}
        _ => return Err(Error::DegeneratePairing),
    }
    let lhs = matrix::mul(&F, &m.transpose(), s);
    let rhs = matrix::mul(&F, s, m);
    for i in 0..m.rows {
        for j in 0..m.cols {
            if lhs.at(i, j) != rhs.at(i, j) {
                return Ok(DualityVerdict {
                    self_adjoint: false,
                    witness: Some((i, j, lhs.at(i, j).clone(), rhs.at(i, j).clone())),
                });
            }
        }
    }
    Ok(DualityVerdict { self_adjoint: true, witness: None })
}

/// B-side constant data of the weighted-projective mirror at `x = 1`:
/// the cyclic multiplication matrix and the block pairing normalized so the
/// second block carries `1/w^w`.
pub fn wps_rescaling_input(wd: &WeightData) -> (QMat, QMat) {
    let mu = wd.mu;
    let n = wd.n();
    let w_pow_w = wd
        .weights
        .iter()
        .fold(Rational::one(), |acc, &w| &acc * &Rational::from(w as i64).pow(w as i32));
    let mut a0 = matrix::zeros(&F, mu, mu);
    for i in 0..mu - 1 {
        a0.set(i + 1, i, Rational::from(mu as i64));
    }
    a0.set(0, mu - 1, &Rational::from(mu as i64) / &w_pow_w);
    let s = Matrix::from_fn(mu, mu, |k, l| {
        if k <= n && k + l == n {
            Rational::one()
        } else if k > n && k + l == mu + n {
            w_pow_w.recip().unwrap()
        } else {
            Rational::zero()
        }
    });
    (a0, s)
}

/// Flat-case classical limit: for a flat logarithmic system with
/// `[A_infty, A_0(0)] = A_0(0)`, the twisted residue `A_infty - D + A_0(0)`
/// is the regular-singular form at the origin.
pub fn flat_classical_limit(
    a0_at_zero: &QMat,
    alpha: &[Rational],
) -> Result<QMat> {
    let mu = alpha.len();
    let a_inf = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            alpha[i].clone()
        } else {
            Rational::zero()
        }
    });
    let comm = matrix::commutator(&F, &a_inf, a0_at_zero);
    if comm != *a0_at_zero {
        return Err(Error::Invalid("conformality [A_infty, A0(0)] = A0(0) fails".into()));
    }
    let d = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            alpha[i].floor()
        } else {
            Rational::zero()
        }
    });
    Ok(matrix::add(&F, &matrix::sub(&F, &a_inf, &d), a0_at_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wps::build_weight_data;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn wps_125_graded_pieces() {
        let wd = build_weight_data(&[1, 2, 5]).unwrap();
        let (a0, _s) = wps_rescaling_input(&wd);
        let data = deligne_decompose(&a0, &wd.alpha).unwrap();
        assert_eq!(data.twist, vec![0, 1, 2, 1, 0, 1, 1, 0]);
        // grade-0 piece maps e_i -> 8 e_{i+1} exactly for i in {0, 1, 4}
        let grade0 = data.graded.get(&0).unwrap();
        let mut nonzero = Vec::new();
        for row in 0..8 {
            for col in 0..8 {
                if !grade0.at(row, col).is_zero() {
                    nonzero.push((row, col, grade0.at(row, col).clone()));
                }
            }
        }
        assert_eq!(
            nonzero,
            vec![
                (1, 0, q(8, 1)),
                (2, 1, q(8, 1)),
                (5, 4, q(8, 1)),
            ]
        );
    }

    #[test]
    fn wps_125_psi_limit() {
        let wd = build_weight_data(&[1, 2, 5]).unwrap();
        let (a0, _) = wps_rescaling_input(&wd);
        let psi = psi_limit(&a0, &wd.alpha).unwrap();
        let mut nonzero = Vec::new();
        for row in 0..8 {
            for col in 0..8 {
                if !psi.at(row, col).is_zero() {
                    nonzero.push((row, col, psi.at(row, col).clone()));
                }
            }
        }
        // e_i -> 8 e_{i+1} for i in {0, 1} only
        assert_eq!(nonzero, vec![(1, 0, q(8, 1)), (2, 1, q(8, 1))]);
    }

    #[test]
    fn wps_125_duality_verdicts() {
        let wd = build_weight_data(&[1, 2, 5]).unwrap();
        let (a0, s) = wps_rescaling_input(&wd);
        let data = deligne_decompose(&a0, &wd.alpha).unwrap();
        // the graded limit is self-dual
        let good = check_limit_duality(&data.psi_limit, &s).unwrap();
        assert!(good.self_adjoint);
        // the naive grade-0 piece is not; witness prints 8/w^w against 0
        let grade0 = data.graded.get(&0).unwrap();
        let bad = check_limit_duality(grade0, &s).unwrap();
        assert!(!bad.self_adjoint);
        let (i, j, lhs, rhs) = bad.witness.unwrap();
        // S(A e_4, e_5) = 8/w^w, S(e_4, A e_5) = 0 (w^w = 2^2 5^5 = 12500)
        assert_eq!((i, j), (4, 5));
        assert_eq!(lhs, q(8, 12500));
        assert_eq!(rhs, q(0, 1));
    }

    #[test]
    fn pn_single_piece_and_full_subdiagonal() {
        let wd = build_weight_data(&[1, 1, 1]).unwrap();
        // nilpotent part only: single grade-0 piece
        let (mut a0, _) = wps_rescaling_input(&wd);
        let full = a0.clone();
        a0.set(0, 2, Rational::zero());
        let data = deligne_decompose(&a0, &wd.alpha).unwrap();
        assert_eq!(data.graded.len(), 1);
        assert!(data.graded.contains_key(&0));
        // with the corner included, the corner sits at grade n+1
        let data_full = deligne_decompose(&full, &wd.alpha).unwrap();
        assert_eq!(data_full.graded.len(), 2);
        assert!(data_full.graded.contains_key(&3));
        // psi limit keeps the whole subdiagonal and drops the corner
        let psi = psi_limit(&full, &wd.alpha).unwrap();
        assert!(psi.at(0, 2).is_zero());
        assert_eq!(*psi.at(1, 0), q(3, 1));
        assert_eq!(*psi.at(2, 1), q(3, 1));
    }

    #[test]
    fn zero_and_diagonal_edge_cases() {
        let wd = build_weight_data(&[1, 2]).unwrap();
        let zero = matrix::zeros(&F, 3, 3);
        let data = deligne_decompose(&zero, &wd.alpha).unwrap();
        assert!(data.graded.is_empty());
        // diagonal input has no spectrum-gap-one support
        let diag = Matrix::from_fn(3, 3, |i, j| {
            if i == j {
                q(i as i64 + 1, 1)
            } else {
                Rational::zero()
            }
        });
        let psi = psi_limit(&diag, &wd.alpha).unwrap();
        assert!(matrix::is_zero(&F, &psi));
    }

    #[test]
    fn symmetric_toy_is_self_dual() {
        // symmetric tridiagonal with trivial spectrum (all alpha = n/2 = 1)
        let alphas = vec![q(1, 1); 3];
        let m = Matrix::from_rows(vec![
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(3, 1), q(1, 1)],
            vec![q(0, 1), q(1, 1), q(2, 1)],
        ]);
        let s = matrix::identity(&F, 3);
        let verdict = check_limit_duality(&m, &s).unwrap();
        assert!(verdict.self_adjoint);
        let _ = alphas;
    }

    #[test]
    fn psi_limit_is_nilpotent() {
        for w in [vec![1u32, 2, 5], vec![1, 2, 3], vec![1, 1, 1, 1]] {
            let wd = build_weight_data(&w).unwrap();
            let (a0, _) = wps_rescaling_input(&wd);
            let psi = psi_limit(&a0, &wd.alpha).unwrap();
            let mut p = psi.clone();
            for _ in 0..wd.mu {
                p = matrix::mul(&F, &p, &psi);
            }
            assert!(matrix::is_zero(&F, &p), "psi limit not nilpotent for {w:?}");
        }
    }

    #[test]
    fn flat_limit_twisted_residue() {
        // P^2 rescaled-flat: A0(0) is the nilpotent subdiagonal, alpha = (0,1,2)
        let wd = build_weight_data(&[1, 1, 1]).unwrap();
        let (mut a0, _) = wps_rescaling_input(&wd);
        a0.set(0, 2, Rational::zero());
        let res = flat_classical_limit(&a0, &wd.alpha).unwrap();
        // A_infty - D = 0 for integral spectrum, so the residue is A0(0)
        assert_eq!(res, a0);
    }
}
