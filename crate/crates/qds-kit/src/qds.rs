//! The quantum differential system data model and its axiom checkers.
//!
//! A logarithmic system is stored through the characteristic matrices of its
//! connection in a fixed basis,
//!
//! ```text
//!   sum_i (M0^(i)(x) + M1^(i)(x) tau) dx_i/x_i + (N0(x) + N1(x) tau) dtau/tau
//! ```
//!
//! together with the pairing matrix `g` and the pairing weight `n`. The
//! classical objects are recovered as `Phi^(i) = M1^(i)`, `V_infty = -N0`,
//! `V_0 = -N1`, and the residual connection `C^(i) = M0^(i)`.

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::poly::{Poly, PolyRing};
use crate::rational::Rational;
use crate::ring::{DifferentialRing, Ring, RationalField};
use crate::wps::WeightData;

#[derive(Clone, Debug)]
pub struct QDSystem<R: DifferentialRing> {
    pub ring: R,
    /// rank of the bundle
    pub mu: usize,
    /// pairing weight `n` (the theta-power of S)
    pub weight: i64,
    /// ring-variable index of each logarithmic coordinate
    pub log_vars: Vec<usize>,
    /// residue parts `M0^(i)` per logarithmic coordinate
    pub m0: Vec<Matrix<R::Elem>>,
    /// tau-linear parts `M1^(i)` per logarithmic coordinate
    pub m1: Vec<Matrix<R::Elem>>,
    /// constant part of the tau-direction matrix (equals `-A_infty`)
    pub n0: Matrix<R::Elem>,
    /// tau-linear part of the tau-direction matrix (equals `-A_0(x)`)
    pub n1: Matrix<R::Elem>,
    /// pairing matrix `g`
    pub pairing: Matrix<R::Elem>,
    /// optional spectrum, basis-ordered
    pub spectrum: Option<Vec<Rational>>,
}

/// Sign convention for the Higgs maps entering products and period maps.
/// The period map of the paper is `-Phi`, so the two conventions differ by
/// a global sign of the stored `M1` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiSign {
    /// `Phi^(i) = M1^(i)` as stored
    AsStored,
    /// `Phi^(i) = -M1^(i)`
    Negated,
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, pass: bool) {
        self.entries.push(CheckEntry { name: name.into(), pass });
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }
}

impl<R: DifferentialRing> QDSystem<R> {
    pub fn a_infty(&self) -> Matrix<R::Elem> {
        matrix::neg(&self.ring, &self.n0)
    }

    pub fn a0(&self) -> Matrix<R::Elem> {
        matrix::neg(&self.ring, &self.n1)
    }

    pub fn phi(&self, coord: usize, sign: PhiSign) -> Matrix<R::Elem> {
        match sign {
            PhiSign::AsStored => self.m1[coord].clone(),
            PhiSign::Negated => matrix::neg(&self.ring, &self.m1[coord]),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.m0.iter().all(|m| matrix::is_zero(&self.ring, m))
    }

    fn log_d(&self, m: &Matrix<R::Elem>, coord: usize) -> Result<Matrix<R::Elem>> {
        let var = self.log_vars[coord];
        let mut out = m.clone();
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(i, j, self.ring.log_derivative(m.at(i, j), var)?);
            }
        }
        Ok(out)
    }
}

/// Flatness of the full connection, relation by relation. The x-x and x-tau
/// commutation identities are separated by tau-degree into the classical
/// pieces: residual flatness, `Phi^Phi = 0`, `grad Phi = 0`, `grad V_infty = 0`,
/// `grad V_0 + Phi = [Phi, V_infty]`, `[V_0, Phi] = 0`.
pub fn check_integrability<R: DifferentialRing>(sys: &QDSystem<R>) -> Result<Report> {
    let ring = &sys.ring;
    let mut report = Report::default();
    let r = sys.log_vars.len();
    let name = |i: usize| sys.ring.var_name(sys.log_vars[i]).to_string();

    // pairwise x_i / x_j relations
    for i in 0..r {
        for j in i + 1..r {
            // tau-degree 0: residual connection flatness
            let deg0 = matrix::add(
                ring,
                &matrix::sub(ring, &sys.log_d(&sys.m0[j], i)?, &sys.log_d(&sys.m0[i], j)?),
                &matrix::commutator(ring, &sys.m0[i], &sys.m0[j]),
            );
            report.push(
                format!("residual flatness [{},{}]", name(i), name(j)),
                matrix::is_zero(ring, &deg0),
            );
            // tau-degree 1: grad Phi = 0
            let deg1 = matrix::add(
                ring,
                &matrix::sub(ring, &sys.log_d(&sys.m1[j], i)?, &sys.log_d(&sys.m1[i], j)?),
                &matrix::add(
                    ring,
                    &matrix::commutator(ring, &sys.m0[i], &sys.m1[j]),
                    &matrix::commutator(ring, &sys.m1[i], &sys.m0[j]),
                ),
            );
            report.push(
                format!("grad Phi [{},{}]", name(i), name(j)),
                matrix::is_zero(ring, &deg1),
            );
            // tau-degree 2: Phi ^ Phi = 0
            let deg2 = matrix::commutator(ring, &sys.m1[i], &sys.m1[j]);
            report.push(
                format!("Phi^Phi [{},{}]", name(i), name(j)),
                matrix::is_zero(ring, &deg2),
            );
        }
    }

    // x_i / tau relations
    for i in 0..r {
        // tau-degree 0: grad V_infty = 0
        let deg0 = matrix::add(
            ring,
            &sys.log_d(&sys.n0, i)?,
            &matrix::commutator(ring, &sys.m0[i], &sys.n0),
        );
        report.push(format!("grad V_infty [{}]", name(i)), matrix::is_zero(ring, &deg0));
        // tau-degree 1: grad V_0 + Phi = [Phi, V_infty]
        let deg1 = matrix::add(
            ring,
            &matrix::sub(ring, &sys.log_d(&sys.n1, i)?, &sys.m1[i]),
            &matrix::add(
                ring,
                &matrix::commutator(ring, &sys.m0[i], &sys.n1),
                &matrix::commutator(ring, &sys.m1[i], &sys.n0),
            ),
        );
        report.push(
            format!("grad V_0 + Phi = [Phi, V_infty] [{}]", name(i)),
            matrix::is_zero(ring, &deg1),
        );
        // tau-degree 2: [V_0, Phi] = 0
        let deg2 = matrix::commutator(ring, &sys.m1[i], &sys.n1);
        report.push(format!("[V_0, Phi] [{}]", name(i)), matrix::is_zero(ring, &deg2));
    }
    Ok(report)
}

/// Pairing axioms, written without inverting `g`:
/// `V_infty + V_infty^* = n I  <=>  N0^T g + g N0 = -n g`,
/// `V_0^* = V_0  <=>  N1^T g = g N1`,
/// `Phi^* = Phi  <=>  M1^T g = g M1`,
/// and flatness of `g` along the residual connection,
/// `x_i d(g) = M0^T g + g M0`.
pub fn check_pairing<R: DifferentialRing>(sys: &QDSystem<R>) -> Result<Report> {
    let ring = &sys.ring;
    let g = &sys.pairing;
    let mut report = Report::default();

    let nondegenerate = match matrix::det(ring, g) {
        Ok(d) => !ring.is_zero(&d),
        Err(_) => false,
    };
    if !nondegenerate {
        return Err(Error::SingularPairing);
    }
    report.push("pairing nondegenerate", true);

    let gt = |m: &Matrix<R::Elem>| matrix::mul(ring, &m.transpose(), g);
    let tg = |m: &Matrix<R::Elem>| matrix::mul(ring, g, m);

    // V_infty + V_infty^* = n I
    let n_scaled = matrix::scale(ring, g, &ring.from_i64(-sys.weight));
    let lhs = matrix::add(ring, &gt(&sys.n0), &tg(&sys.n0));
    report.push("V_infty + V_infty^* = n I", lhs == n_scaled);

    // V_0 self-adjoint
    report.push("V_0^* = V_0", gt(&sys.n1) == tg(&sys.n1));

    // Phi self-adjoint per coordinate
    for (i, m1) in sys.m1.iter().enumerate() {
        report.push(
            format!("Phi^* = Phi [{}]", sys.ring.var_name(sys.log_vars[i])),
            gt(m1) == tg(m1),
        );
    }

    // grad-flatness of g
    for (i, m0) in sys.m0.iter().enumerate() {
        let dg = sys.log_d(g, i)?;
        let rhs = matrix::add(ring, &gt(m0), &tg(m0));
        report.push(
            format!("grad g = M0^T g + g M0 [{}]", sys.ring.var_name(sys.log_vars[i])),
            dg == rhs,
        );
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpsBasis {
    /// basis `omega` in the coordinate `x`: diagonal residue `M0 = diag(c)`
    Omega,
    /// basis `omega~ = omega x^{-R}` in the coordinate `zeta = x^r`: flat
    RescaledFlat,
}

/// The weighted-projective-space mirror system of a weight vector.
pub fn build_wps_system(wd: &WeightData, basis: WpsBasis) -> QDSystem<PolyRing<RationalField>> {
    match basis {
        WpsBasis::Omega => build_wps_omega(wd),
        WpsBasis::RescaledFlat => build_wps_rescaled_flat(wd),
    }
}

fn cyclic_with_corner(
    ring: &PolyRing<RationalField>,
    mu: usize,
    subdiag: Vec<Poly<Rational>>,
    corner: Poly<Rational>,
) -> Matrix<Poly<Rational>> {
    let mut m = matrix::zeros(ring, mu, mu);
    for (i, v) in subdiag.into_iter().enumerate() {
        m.set(i + 1, i, v);
    }
    m.set(0, mu - 1, corner);
    m
}

fn build_wps_omega(wd: &WeightData) -> QDSystem<PolyRing<RationalField>> {
    let ring = PolyRing::new(RationalField, &["x"]);
    let mu = wd.mu;
    let x = ring.var(0);
    // A0(x) = mu * (cyclic: subdiagonal 1, corner x / w^w)
    let w_pow_w = wd
        .weights
        .iter()
        .fold(Rational::one(), |acc, &w| &acc * &Rational::from(w as i64).pow(w as i32));
    let corner = ring.mul(&x, &ring.from_rational(&(&Rational::from(mu as i64) / &w_pow_w)));
    let a0 = cyclic_with_corner(
        &ring,
        mu,
        vec![ring.from_rational(&Rational::from(mu as i64)); mu - 1],
        corner,
    );
    // M1 = -A0/mu, M0 = diag(c), N = -(A0 tau + A_infty)
    let m1 = matrix::scale(
        &ring,
        &a0,
        &ring.from_rational(&Rational::from(mu as i64).recip().unwrap()),
    );
    let m1 = matrix::neg(&ring, &m1);
    let m0 = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            ring.from_rational(&wd.c[i])
        } else {
            ring.zero()
        }
    });
    let n1 = matrix::neg(&ring, &a0);
    let n0 = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            ring.from_rational(&-&wd.alpha[i])
        } else {
            ring.zero()
        }
    });
    // pairing: g(omega_k, omega_l) = 1/(w_0..w_n) on k+l = n (k <= n),
    // (x/w^w)/(w_0..w_n) on k+l = mu+n (k >= n+1)
    let n = wd.n();
    let w_prod = wd
        .weights
        .iter()
        .fold(Rational::one(), |acc, &w| &acc * &Rational::from(w as i64));
    let pairing = Matrix::from_fn(mu, mu, |k, l| {
        if k <= n && k + l == n {
            ring.from_rational(&w_prod.recip().unwrap())
        } else if k > n && k + l == mu + n {
            ring.mul(
                &ring.var(0),
                &ring.from_rational(&(&w_pow_w.recip().unwrap() * &w_prod.recip().unwrap())),
            )
        } else {
            ring.zero()
        }
    });
    QDSystem {
        ring,
        mu,
        weight: n as i64,
        log_vars: vec![0],
        m0: vec![m0],
        m1: vec![m1],
        n0,
        n1,
        pairing,
        spectrum: Some(wd.alpha.clone()),
    }
}

fn build_wps_rescaled_flat(wd: &WeightData) -> QDSystem<PolyRing<RationalField>> {
    let ring = PolyRing::new(RationalField, &["zeta"]);
    let mu = wd.mu;
    let n = wd.n();
    let w_pow_w = wd
        .weights
        .iter()
        .fold(Rational::one(), |acc, &w| &acc * &Rational::from(w as i64).pow(w as i32));
    let exp_of = |delta: &Rational| -> u32 {
        let e = delta / &wd.r;
        debug_assert!(e.is_integer() && !e.is_negative(), "zeta exponent must be in N");
        e.to_i64().unwrap() as u32
    };
    // subdiagonal entries zeta^{(c_{i+1} - c_i)/r}, corner zeta^{(1-c_{mu-1})/r}/w^w
    let mu_q = Rational::from(mu as i64);
    let subdiag: Vec<Poly<Rational>> = (0..mu - 1)
        .map(|i| {
            let e = exp_of(&(&wd.c[i + 1] - &wd.c[i]));
            ring.monomial(vec![e], mu_q.clone())
        })
        .collect();
    let corner_exp = exp_of(&(&Rational::one() - &wd.c[mu - 1]));
    let corner = ring.monomial(vec![corner_exp], &mu_q / &w_pow_w);
    let a0 = cyclic_with_corner(&ring, mu, subdiag, corner);
    // M1~ = -(1/(r mu)) A0~
    let coeff = (&wd.r * &mu_q).recip().unwrap();
    let m1 = matrix::neg(&ring, &matrix::scale(&ring, &a0, &ring.from_rational(&coeff)));
    let m0 = matrix::zeros(&ring, mu, mu);
    let n1 = matrix::neg(&ring, &a0);
    let n0 = Matrix::from_fn(mu, mu, |i, j| {
        if i == j {
            ring.from_rational(&-&wd.alpha[i])
        } else {
            ring.zero()
        }
    });
    let w_prod = wd
        .weights
        .iter()
        .fold(Rational::one(), |acc, &w| &acc * &Rational::from(w as i64));
    let pairing = Matrix::from_fn(mu, mu, |k, l| {
        if k <= n && k + l == n {
            ring.from_rational(&w_prod.recip().unwrap())
        } else if k > n && k + l == mu + n {
            ring.from_rational(&(&w_pow_w.recip().unwrap() * &w_prod.recip().unwrap()))
        } else {
            ring.zero()
        }
    });
    QDSystem {
        ring,
        mu,
        weight: n as i64,
        log_vars: vec![0],
        m0: vec![m0],
        m1: vec![m1],
        n0,
        n1,
        pairing,
        spectrum: Some(wd.alpha.clone()),
    }
}

/// Quantum-product structure constants read off the Higgs matrices.
#[derive(Clone, Debug)]
pub struct ProductTable<R: Ring> {
    /// basis index generated by each logarithmic coordinate
    pub generators: Vec<usize>,
    /// multiplication matrix of each generator
    pub mult: Vec<Matrix<R::Elem>>,
    pub commutative: bool,
    pub frobenius: bool,
}

/// Builds the product table under the hypothesis that every logarithmic
/// coordinate sends the primitive section onto a basis vector.
pub fn quantum_product<R: DifferentialRing>(
    sys: &QDSystem<R>,
    primitive: usize,
    sign: PhiSign,
) -> Result<ProductTable<R>> {
    let ring = &sys.ring;
    let mut generators = Vec::new();
    let mut mult = Vec::new();
    for coord in 0..sys.log_vars.len() {
        let phi = sys.phi(coord, sign);
        let image = phi.col(primitive);
        // the image must be exactly a standard basis vector
        let mut found = None;
        for (k, v) in image.iter().enumerate() {
            if ring.is_zero(v) {
                continue;
            }
            if *v == ring.one() && found.is_none() {
                found = Some(k);
            } else {
                return Err(Error::PrimitiveHypothesisFails(coord));
            }
        }
        let k = found.ok_or(Error::PrimitiveHypothesisFails(coord))?;
        generators.push(k);
        mult.push(phi);
    }
    // commutativity of the generator action
    let commutative = (0..mult.len()).all(|i| {
        (i + 1..mult.len()).all(|j| {
            matrix::is_zero(ring, &matrix::commutator(ring, &mult[i], &mult[j]))
        })
    });
    // Frobenius property g(a*b, c) = g(b, a*c) per generator
    let g = &sys.pairing;
    let frobenius = mult.iter().all(|m| {
        matrix::mul(ring, &m.transpose(), g) == matrix::mul(ring, g, m)
    });
    Ok(ProductTable { generators, mult: mult.clone(), commutative, frobenius })
}

impl<R: Ring> ProductTable<R> {
    /// `omega_i * v` for the i-th generator acting on a coordinate vector.
    pub fn apply(&self, ring: &R, gen: usize, v: &[R::Elem]) -> Vec<R::Elem> {
        matrix::mul_vec(ring, &self.mult[gen], v)
    }
}

/// Restriction of the system to a point: all matrices evaluated at explicit
/// coordinate values.
pub fn restrict_to_point(
    sys: &QDSystem<PolyRing<RationalField>>,
    point: &[Rational],
) -> Result<PointSystem> {
    let ring = &sys.ring;
    if point.len() != ring.nvars() {
        return Err(Error::Invalid(format!(
            "expected {} coordinates, got {}",
            ring.nvars(),
            point.len()
        )));
    }
    let field = RationalField;
    let eval = |m: &Matrix<Poly<Rational>>| -> Matrix<Rational> {
        m.map(|p| ring.subst_into(p, &field, &|c: &Rational| c.clone(), point))
    };
    Ok(PointSystem {
        mu: sys.mu,
        phi: sys.m1.iter().map(&eval).collect(),
        v0: matrix::neg(&field, &eval(&sys.n1)),
    })
}

/// Constant data of a system at a point.
#[derive(Clone, Debug)]
pub struct PointSystem {
    pub mu: usize,
    pub phi: Vec<Matrix<Rational>>,
    pub v0: Matrix<Rational>,
}

/// Generation condition (GC) at a point: the candidate and its iterated
/// images under `V_0` and the Higgs maps span the fiber. The injectivity
/// condition is vacuous on a point.
pub fn is_pre_primitive(point_sys: &PointSystem, candidate: &[Rational]) -> bool {
    let field = RationalField;
    let mu = point_sys.mu;
    if candidate.iter().all(|c| c.is_zero()) {
        return false;
    }
    let mut basis: Vec<Vec<Rational>> = vec![candidate.to_vec()];
    let mut frontier = vec![candidate.to_vec()];
    let mut ops: Vec<&Matrix<Rational>> = point_sys.phi.iter().collect();
    ops.push(&point_sys.v0);
    loop {
        let mut new_frontier = Vec::new();
        for v in &frontier {
            for op in &ops {
                let image = matrix::mul_vec(&field, op, v);
                let mut rows = basis.clone();
                rows.push(image.clone());
                let m = Matrix::from_rows(rows);
                if matrix::rank(&field, &m) > basis.len() {
                    basis.push(image.clone());
                    new_frontier.push(image);
                }
            }
        }
        if new_frontier.is_empty() || basis.len() == mu {
            break;
        }
        frontier = new_frontier;
    }
    basis.len() == mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wps::build_weight_data;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn wps_12_rescaled_flat_matrices() {
        let wd = build_weight_data(&[1, 2]).unwrap();
        let sys = build_wps_system(&wd, WpsBasis::RescaledFlat);
        let ring = &sys.ring;
        // M1~(zeta) = -2 [[0,0,zeta/4],[1,0,0],[0,zeta,0]]
        let vars = |n: &str| ring.var_by_name(n).ok();
        let expect = crate::parse::parse_matrix(
            ring,
            vars,
            &[
                &["0", "0", "-2*zeta/4"],
                &["-2", "0", "0"],
                &["0", "-2*zeta", "0"],
            ],
        )
        .unwrap();
        assert_eq!(sys.m1[0], expect);
        // pairing from the flat normalization
        assert_eq!(*sys.pairing.at(0, 1), ring.from_rational(&q(1, 2)));
        assert_eq!(*sys.pairing.at(1, 0), ring.from_rational(&q(1, 2)));
        assert_eq!(*sys.pairing.at(2, 2), ring.from_rational(&q(1, 8)));
        assert!(sys.is_flat());
    }

    #[test]
    fn wps_125_omega_residues() {
        let wd = build_weight_data(&[1, 2, 5]).unwrap();
        let sys = build_wps_system(&wd, WpsBasis::Omega);
        let expect = [
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(1, 5),
            q(2, 5),
            q(1, 2),
            q(3, 5),
            q(4, 5),
        ];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(*sys.m0[0].at(i, i), sys.ring.from_rational(e));
        }
    }

    #[test]
    fn integrability_passes_for_wps_systems() {
        for w in [vec![1u32, 2], vec![1, 1, 1], vec![1, 2, 3]] {
            let wd = build_weight_data(&w).unwrap();
            for basis in [WpsBasis::Omega, WpsBasis::RescaledFlat] {
                let sys = build_wps_system(&wd, basis);
                let rep = check_integrability(&sys).unwrap();
                assert!(rep.all_pass(), "integrability fails for {w:?} {basis:?}: {rep:?}");
                let rep = check_pairing(&sys).unwrap();
                assert!(rep.all_pass(), "pairing fails for {w:?} {basis:?}: {rep:?}");
            }
        }
    }

    #[test]
    fn corrupted_system_fails_integrability() {
        let wd = build_weight_data(&[1, 2]).unwrap();
        let mut sys = build_wps_system(&wd, WpsBasis::RescaledFlat);
        let one = sys.ring.one();
        sys.m1[0].set(0, 0, one);
        let rep = check_integrability(&sys).unwrap();
        assert!(!rep.all_pass());
    }

    #[test]
    fn identity_pairing_fails_self_adjointness() {
        let wd = build_weight_data(&[1, 2]).unwrap();
        let mut sys = build_wps_system(&wd, WpsBasis::RescaledFlat);
        sys.pairing = matrix::identity(&sys.ring, sys.mu);
        let rep = check_pairing(&sys).unwrap();
        let v0 = rep
            .entries
            .iter()
            .find(|e| e.name == "V_0^* = V_0")
            .unwrap();
        assert!(!v0.pass);
    }

    #[test]
    fn conformality_hook() {
        // [A_infty, M1~(0)] = M1~(0) for the rescaled-flat system
        for w in [vec![1u32, 2], vec![1, 2, 3], vec![1, 2, 5]] {
            let wd = build_weight_data(&w).unwrap();
            let sys = build_wps_system(&wd, WpsBasis::RescaledFlat);
            let ring = &sys.ring;
            let zero_point = vec![Rational::zero()];
            let field = RationalField;
            let at0 = |m: &Matrix<Poly<Rational>>| -> Matrix<Rational> {
                m.map(|p| ring.subst_into(p, &field, &|c: &Rational| c.clone(), &zero_point))
            };
            let a_inf = at0(&sys.a_infty());
            let m1_0 = at0(&sys.m1[0]);
            assert_eq!(matrix::commutator(&field, &a_inf, &m1_0), m1_0);
        }
    }

    #[test]
    fn pn_product_table() {
        let wd = build_weight_data(&[1, 1, 1]).unwrap();
        let sys = build_wps_system(&wd, WpsBasis::Omega);
        let table = quantum_product(&sys, 0, PhiSign::Negated).unwrap();
        assert_eq!(table.generators, vec![1]);
        assert!(table.commutative);
        assert!(table.frobenius);
        // omega_1 * omega_1 = omega_2, omega_1 * omega_2 = x omega_0
        let ring = &sys.ring;
        let e1: Vec<_> = (0..3)
            .map(|i| if i == 1 { ring.one() } else { ring.zero() })
            .collect();
        let w2 = table.apply(ring, 0, &e1);
        assert_eq!(w2[2], ring.one());
        let w3 = table.apply(ring, 0, &w2);
        assert_eq!(w3[0], ring.var(0));
    }

    #[test]
    fn phi_negated_fails_hypothesis_when_not_basis_vector() {
        let wd = build_weight_data(&[1, 1]).unwrap();
        let sys = build_wps_system(&wd, WpsBasis::Omega);
        // with the as-stored sign, Phi(omega_0) = -omega_1: not a basis vector
        assert!(matches!(
            quantum_product(&sys, 0, PhiSign::AsStored),
            Err(Error::PrimitiveHypothesisFails(0))
        ));
    }

    #[test]
    fn pre_primitivity_at_a_point() {
        let wd = build_weight_data(&[1, 1, 1]).unwrap();
        let sys = build_wps_system(&wd, WpsBasis::Omega);
        let pt = restrict_to_point(&sys, &[Rational::one()]).unwrap();
        let e0 = vec![Rational::one(), Rational::zero(), Rational::zero()];
        assert!(is_pre_primitive(&pt, &e0));
        let zero = vec![Rational::zero(); 3];
        assert!(!is_pre_primitive(&pt, &zero));
    }
}
