//! The Hirzebruch-surface mirror package: every explicit connection matrix
//! of the four-dimensional system over the square-root extension ring, the
//! flat metric, base changes between the bases, flat coordinates, monodromy,
//! the quantum product, and the orbifold specialization.

use crate::error::{Error, Result};
use crate::extension::{ExtElem, ExtRing};
use crate::gaussian::GaussianRational;
use crate::localized::{Frac, LocRing};
use crate::matrix::{self, Matrix};
use crate::parse::{parse_expr, parse_matrix};
use crate::poly::{Poly, PolyRing};
use crate::qds::{check_integrability, check_pairing, QDSystem, Report};
use crate::rational::Rational;
use crate::ring::{GaussianField, RationalField, Ring};

type EMat = Matrix<ExtElem>;
const F: RationalField = RationalField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F2Basis {
    /// the monomial classes `(1, 1/u2, u2/u1, u2^2/u1)`
    Triangle,
    /// the log-normalized basis `omega`
    Omega,
    /// flat basis, normalization `p24 = 0`
    Flat,
    /// flat basis, normalization `p24 = -1/2` (the mirror one)
    Can,
}

/// Connection matrices in one basis: each direction stored as the pair
/// (constant part, tau-linear part) of its logarithmic matrix.
#[derive(Clone, Debug)]
pub struct F2Connection {
    pub basis: F2Basis,
    pub ring: ExtRing,
    /// `tau grad_tau`
    pub tau: (EMat, EMat),
    /// `q2 grad_{q2}`
    pub q2: (EMat, EMat),
    /// `q1 grad_{q1}`
    pub q1: (EMat, EMat),
    pub pairing: EMat,
}

fn evars(ring: &ExtRing) -> impl Fn(&str) -> Option<ExtElem> + Copy + '_ {
    move |name: &str| ring.var(name).ok()
}

fn emat(ring: &ExtRing, rows: &[&[&str]]) -> EMat {
    parse_matrix(ring, evars(ring), rows).expect("bad matrix literal")
}

fn diag_grading(ring: &ExtRing) -> EMat {
    emat(
        ring,
        &[
            &["0", "0", "0", "0"],
            &["0", "-1", "0", "0"],
            &["0", "0", "-2", "0"],
            &["0", "0", "0", "-1"],
        ],
    )
}

/// The paper's matrices verbatim, in logarithmic form.
pub fn build_f2(basis: F2Basis) -> F2Connection {
    let ring = ExtRing::f2_ring();
    let zero4 = matrix::zeros(&ring, 4, 4);
    match basis {
        F2Basis::Omega => {
            let tau1 = emat(
                &ring,
                &[
                    &["0", "-2*q2", "0", "0"],
                    &["-2", "0", "-4*q1*q2", "0"],
                    &["0", "-4", "0", "-2"],
                    &["0", "0", "2*q2*(4*q1-1)", "0"],
                ],
            );
            let q2_1 = emat(
                &ring,
                &[
                    &["0", "-q2", "0", "0"],
                    &["-1", "0", "-2*q1*q2", "0"],
                    &["0", "-2", "0", "-1"],
                    &["0", "0", "q2*(4*q1-1)", "0"],
                ],
            );
            let q1_1 = emat(
                &ring,
                &[
                    &["0", "0", "0", "q1*q2/(4*q1-1)"],
                    &["0", "0", "-q1*q2", "0"],
                    &["0", "-1", "0", "-2*q1/(4*q1-1)"],
                    &["-1", "0", "2*q1*q2", "0"],
                ],
            );
            let q1_0 = emat(
                &ring,
                &[
                    &["0", "0", "0", "0"],
                    &["0", "0", "0", "q1/(4*q1-1)"],
                    &["0", "0", "0", "0"],
                    &["0", "0", "0", "-2*q1/(4*q1-1)"],
                ],
            );
            let pairing = emat(
                &ring,
                &[
                    &["0", "0", "1", "0"],
                    &["0", "2", "0", "1"],
                    &["1", "0", "0", "0"],
                    &["0", "1", "0", "2*q1/(4*q1-1)"],
                ],
            );
            F2Connection {
                basis,
                tau: (diag_grading(&ring), tau1),
                q2: (zero4.clone(), q2_1),
                q1: (q1_0, q1_1),
                pairing,
                ring,
            }
        }
        F2Basis::Triangle => {
            let tau1 = emat(
                &ring,
                &[
                    &["0", "-2", "0", "0"],
                    &["-2*q2", "0", "-4*q2", "0"],
                    &["0", "-4*q1", "0", "-2*q2"],
                    &["0", "0", "2*(4*q1-1)", "0"],
                ],
            );
            let q2_1 = emat(
                &ring,
                &[
                    &["0", "-1", "0", "0"],
                    &["-q2", "0", "-2*q2", "0"],
                    &["0", "-2*q1", "0", "-q2"],
                    &["0", "0", "4*q1-1", "0"],
                ],
            );
            let q2_0 = emat(
                &ring,
                &[
                    &["0", "0", "0", "0"],
                    &["0", "-1", "0", "0"],
                    &["0", "0", "-1", "0"],
                    &["0", "0", "0", "0"],
                ],
            );
            let q1_1 = emat(
                &ring,
                &[
                    &["0", "0", "0", "q2/(4*q1-1)"],
                    &["0", "0", "-q2", "0"],
                    &["0", "-q1", "0", "-2*q1*q2/(4*q1-1)"],
                    &["-q1", "0", "2*q1", "0"],
                ],
            );
            let q1_0 = emat(
                &ring,
                &[
                    &["0", "0", "0", "0"],
                    &["0", "0", "0", "q2/(4*q1-1)"],
                    &["0", "0", "-1", "0"],
                    &["0", "0", "0", "-(6*q1-1)/(4*q1-1)"],
                ],
            );
            // transported pairing: g_tri = (D^{-1})^T g_omega D^{-1}
            let pairing = emat(
                &ring,
                &[
                    &["0", "0", "1/(q1*q2)", "0"],
                    &["0", "2/(q2^2)", "0", "1/(q1*q2)"],
                    &["1/(q1*q2)", "0", "0", "0"],
                    &["0", "1/(q1*q2)", "0", "2/(q1*(4*q1-1))"],
                ],
            );
            F2Connection {
                basis,
                tau: (diag_grading(&ring), tau1),
                q2: (q2_0, q2_1),
                q1: (q1_0, q1_1),
                pairing,
                ring,
            }
        }
        F2Basis::Flat => {
            let tau1 = emat(
                &ring,
                &[
                    &["0", "-2*q2", "0", "q2*s"],
                    &["-2", "0", "-q2", "0"],
                    &["0", "-4", "0", "0"],
                    &["0", "0", "-2*q2*s", "0"],
                ],
            );
            let q2_1 = emat(
                &ring,
                &[
                    &["0", "-q2", "0", "q2*s/2"],
                    &["-1", "0", "-q2/2", "0"],
                    &["0", "-2", "0", "0"],
                    &["0", "0", "-q2*s", "0"],
                ],
            );
            let q1_1 = emat(
                &ring,
                &[
                    &["0", "0", "0", "-q1*q2/s"],
                    &["-1/2", "0", "0", "0"],
                    &["0", "-1", "0", "1/(2*s)"],
                    &["-1/s", "0", "2*q1*q2/s", "0"],
                ],
            );
            let pairing = emat(
                &ring,
                &[
                    &["0", "0", "1", "0"],
                    &["0", "2", "0", "0"],
                    &["1", "0", "0", "0"],
                    &["0", "0", "0", "-1/2"],
                ],
            );
            F2Connection {
                basis,
                tau: (diag_grading(&ring), tau1),
                q2: (zero4.clone(), q2_1),
                q1: (zero4, q1_1),
                pairing,
                ring,
            }
        }
        F2Basis::Can => {
            let tau1 = emat(
                &ring,
                &[
                    &["0", "-2*q2", "0", "q2+q2*s"],
                    &["-2", "0", "-q2-q2*s", "0"],
                    &["0", "-4", "0", "2"],
                    &["0", "0", "-2*q2*s", "0"],
                ],
            );
            let q2_1 = emat(
                &ring,
                &[
                    &["0", "-q2", "0", "q2*(1+s)/2"],
                    &["-1", "0", "-q2*(1+s)/2", "0"],
                    &["0", "-2", "0", "1"],
                    &["0", "0", "-q2*s", "0"],
                ],
            );
            let q1_1 = emat(
                &ring,
                &[
                    &["0", "0", "0", "-q1*q2/s"],
                    &["-(1+1/s)/2", "0", "q1*q2/s", "0"],
                    &["0", "-1", "0", "(1/s+1)/2"],
                    &["-1/s", "0", "2*q1*q2/s", "0"],
                ],
            );
            let pairing = emat(
                &ring,
                &[
                    &["0", "0", "1", "0"],
                    &["0", "2", "0", "-1"],
                    &["1", "0", "0", "0"],
                    &["0", "-1", "0", "0"],
                ],
            );
            F2Connection {
                basis,
                tau: (diag_grading(&ring), tau1),
                q2: (zero4.clone(), q2_1),
                q1: (zero4, q1_1),
                pairing,
                ring,
            }
        }
    }
}

/// The base change from the `omega` basis to the given one: `new = omega P`.
pub fn base_change_from_omega(ring: &ExtRing, basis: F2Basis) -> Result<EMat> {
    match basis {
        F2Basis::Omega => Ok(matrix::identity(ring, 4)),
        // omega = triangle * diag(1, q2, q1 q2, q1), so P = diag(...)^{-1}
        F2Basis::Triangle => {
            let d = emat(
                ring,
                &[
                    &["1", "0", "0", "0"],
                    &["0", "q2", "0", "0"],
                    &["0", "0", "q1*q2", "0"],
                    &["0", "0", "0", "q1"],
                ],
            );
            matrix::try_inverse(ring, &d)
        }
        F2Basis::Flat => Ok(flat_base_change(ring, &Rational::zero())),
        F2Basis::Can => Ok(flat_base_change(ring, &Rational::new(-1, 2))),
    }
}

/// `P(p24)` with the square-root column, the free parameter being the choice
/// of a degree-two class.
pub fn flat_base_change(ring: &ExtRing, p24: &Rational) -> EMat {
    let mut p = matrix::identity(ring, 4);
    // entry (1,3) = -s/2 + p24, entry (3,3) = s
    let half = ring.from_rational(&Rational::new(-1, 2));
    let entry = ring.add(&ring.mul(&half, &ring.s()), &ring.from_rational(p24));
    p.set(1, 3, entry);
    p.set(3, 3, ring.s());
    p
}

/// Transports a connection through the base change `new = old P`:
/// direction matrices become `P^{-1} M P + P^{-1} delta(P)`, the pairing
/// `P^T g P`.
pub fn transport(conn: &F2Connection, p: &EMat, new_basis: F2Basis) -> Result<F2Connection> {
    let ring = &conn.ring;
    let p_inv = matrix::try_inverse(ring, p)?;
    let conj = |m: &EMat| matrix::mul(ring, &matrix::mul(ring, &p_inv, m), p);
    let log_d = |m: &EMat, var: usize| -> Result<EMat> {
        let mut out = m.clone();
        for i in 0..4 {
            for j in 0..4 {
                out.set(i, j, ring.log_derivative(m.at(i, j), var)?);
            }
        }
        Ok(out)
    };
    let q1_idx = ring.base.var_index("q1")?;
    let q2_idx = ring.base.var_index("q2")?;
    let shift = |var: usize| -> Result<EMat> {
        Ok(matrix::mul(ring, &p_inv, &log_d(p, var)?))
    };
    Ok(F2Connection {
        basis: new_basis,
        ring: ring.clone(),
        tau: (conj(&conn.tau.0), conj(&conn.tau.1)),
        q2: (
            matrix::add(ring, &conj(&conn.q2.0), &shift(q2_idx)?),
            conj(&conn.q2.1),
        ),
        q1: (
            matrix::add(ring, &conj(&conn.q1.0), &shift(q1_idx)?),
            conj(&conn.q1.1),
        ),
        pairing: matrix::mul(ring, &matrix::mul(ring, &p.transpose(), &conn.pairing), p),
    })
}

impl F2Connection {
    /// View as a two-log-coordinate quantum differential system
    /// (directions ordered `q1, q2`).
    pub fn to_qdsystem(&self) -> QDSystem<ExtRing> {
        QDSystem {
            ring: self.ring.clone(),
            mu: 4,
            weight: 2,
            log_vars: vec![0, 1],
            m0: vec![self.q1.0.clone(), self.q2.0.clone()],
            m1: vec![self.q1.1.clone(), self.q2.1.clone()],
            n0: self.tau.0.clone(),
            n1: self.tau.1.clone(),
            pairing: self.pairing.clone(),
            spectrum: Some(vec![
                Rational::zero(),
                Rational::one(),
                Rational::from(2),
                Rational::one(),
            ]),
        }
    }

    fn matrices(&self) -> [(&str, &EMat); 6] {
        [
            ("tau const", &self.tau.0),
            ("tau linear", &self.tau.1),
            ("q2 const", &self.q2.0),
            ("q2 linear", &self.q2.1),
            ("q1 const", &self.q1.0),
            ("q1 linear", &self.q1.1),
        ]
    }
}

/// Zero curvature, metric axioms and (for the derived bases) entry-for-entry
/// base-change consistency with the `omega` matrices.
pub fn verify_f2(conn: &F2Connection) -> Result<Report> {
    let sys = conn.to_qdsystem();
    let mut report = check_integrability(&sys)?;
    // the tau-direction curvature against each log direction is part of
    // check_integrability; the pairing axioms:
    report.merge(check_pairing(&sys)?);

    if conn.basis != F2Basis::Omega {
        let omega = build_f2(F2Basis::Omega);
        let p = base_change_from_omega(&conn.ring, conn.basis)?;
        let derived = transport(&omega, &p, conn.basis)?;
        for ((name, a), (_, b)) in conn.matrices().iter().zip(derived.matrices().iter()) {
            report.push(format!("base change reproduces {} matrix", name), *a == *b);
        }
        report.push(
            "base change reproduces pairing",
            conn.pairing == derived.pairing,
        );
    }
    Ok(report)
}

/// Euler-rescaling identity: the tau-linear part of `tau grad_tau` is twice
/// the tau-linear part of `q2 grad_{q2}`.
pub fn euler_identity(conn: &F2Connection) -> bool {
    let ring = &conn.ring;
    let twice = matrix::scale(ring, &conn.q2.1, &ring.from_i64(2));
    conn.tau.1 == twice
}

// ---------------------------------------------------------------------------
// flat coordinates
// ---------------------------------------------------------------------------

/// `Q[r1, r2]` localized at `r1, r2, 1+r1, 1-r1`.
pub fn r_ring() -> LocRing {
    let poly = PolyRing::new(RationalField, &["r1", "r2"]);
    let r1 = poly.var(0);
    let r2 = poly.var(1);
    let one_plus = poly.add(&poly.one(), &r1);
    let one_minus = poly.sub(&poly.one(), &r1);
    LocRing::new(
        &["r1", "r2"],
        vec![(r1, "r1"), (r2, "r2"), (one_plus, "1+r1"), (one_minus, "1-r1")],
    )
}

/// The flat-coordinate matrices of the `can` basis as polynomial data over
/// `Q[r1, r2]` (two logarithmic coordinates `r1, r2`).
pub fn build_f2_can_r() -> QDSystem<PolyRing<RationalField>> {
    let ring = PolyRing::new(RationalField, &["r1", "r2"]);
    let vars = |n: &str| ring.var_by_name(n).ok();
    let pm = |rows: &[&[&str]]| parse_matrix(&ring, vars, rows).expect("bad matrix literal");
    let tau1 = pm(&[
        &["0", "-2*r2*(1+r1)", "0", "2*r1*r2"],
        &["-2", "0", "-2*r1*r2", "0"],
        &["0", "-4", "0", "2"],
        &["0", "0", "-2*(r1-1)*r2", "0"],
    ]);
    let tau0 = pm(&[
        &["0", "0", "0", "0"],
        &["0", "-1", "0", "0"],
        &["0", "0", "-2", "0"],
        &["0", "0", "0", "-1"],
    ]);
    let r2_1 = pm(&[
        &["0", "-r2*(1+r1)", "0", "r1*r2"],
        &["-1", "0", "-r1*r2", "0"],
        &["0", "-2", "0", "1"],
        &["0", "0", "-(r1-1)*r2", "0"],
    ]);
    let r1_1 = pm(&[
        &["0", "-r1*r2", "0", "r1*r2"],
        &["0", "0", "-r1*r2", "0"],
        &["0", "-1", "0", "0"],
        &["1", "0", "-r1*r2", "0"],
    ]);
    let pairing = pm(&[
        &["0", "0", "1", "0"],
        &["0", "2", "0", "-1"],
        &["1", "0", "0", "0"],
        &["0", "-1", "0", "0"],
    ]);
    let zero = matrix::zeros(&ring, 4, 4);
    QDSystem {
        mu: 4,
        weight: 2,
        log_vars: vec![0, 1],
        m0: vec![zero.clone(), zero],
        m1: vec![r1_1, r2_1],
        n0: tau0,
        n1: tau1,
        pairing,
        spectrum: Some(vec![
            Rational::zero(),
            Rational::one(),
            Rational::from(2),
            Rational::one(),
        ]),
        ring,
    }
}

/// The substitution homomorphism of the flat coordinates:
/// `q1 = r1/(1+r1)^2`, `q2 = r2 (1+r1)`, and the square root specializes on
/// the branch `s -> (r1-1)/(1+r1)` (the branch is what makes the printed
/// flat matrices come out).
pub struct FlatSubstitution {
    pub target: LocRing,
    q1_img: Frac,
    q2_img: Frac,
    s_img: Frac,
    prime_imgs: Vec<Frac>,
}

impl FlatSubstitution {
    pub fn new() -> Result<Self> {
        let target = r_ring();
        let vars = |n: &str| {
            target
                .poly
                .var_by_name(n)
                .ok()
                .map(|p| target.from_poly(p))
        };
        let q1_img = parse_expr(&target, vars, "r1/((1+r1)^2)")?;
        let q2_img = parse_expr(&target, vars, "r2*(1+r1)")?;
        let s_img = parse_expr(&target, vars, "(r1-1)/(1+r1)")?;
        // images of the declared primes q1, q2, 4q1-1
        let four_q1_minus_one = parse_expr(&target, vars, "-(1-r1)^2/((1+r1)^2)")?;
        let prime_imgs = vec![q1_img.clone(), q2_img.clone(), four_q1_minus_one];
        Ok(FlatSubstitution { target, q1_img, q2_img, s_img, prime_imgs })
    }

    pub fn apply(&self, ext: &ExtRing, e: &ExtElem) -> Result<Frac> {
        let even = self.apply_frac(ext, &e.even)?;
        if ext.base.is_zero(&e.odd) {
            return Ok(even);
        }
        let odd = self.apply_frac(ext, &e.odd)?;
        Ok(self.target.add(&even, &self.target.mul(&odd, &self.s_img)))
    }

    fn apply_frac(&self, ext: &ExtRing, f: &Frac) -> Result<Frac> {
        // entries must be free of the formal tau variable
        let tau_idx = ext.base.poly.var_index("tau")?;
        if f.num.degree_in(tau_idx).unwrap_or(0) > 0 {
            return Err(Error::Invalid("substitution applied to a tau-dependent entry".into()));
        }
        let images = vec![self.q1_img.clone(), self.q2_img.clone(), self.target.zero()];
        let mut out = ext.base.poly.subst_into(
            &f.num,
            &self.target,
            &|c: &Rational| self.target.from_rational(c),
            &images,
        );
        for (i, &e) in f.den.iter().enumerate() {
            for _ in 0..e {
                out = self.target.try_div(&out, &self.prime_imgs[i])?;
            }
        }
        Ok(out)
    }
}

/// Substitutes the `can` matrices into flat coordinates and compares with the
/// printed flat-coordinate matrices; also checks the branch identity and the
/// flatness of the two distinguished vector fields.
pub fn flat_coordinate_check() -> Result<Report> {
    let mut report = Report::default();
    let can = build_f2(F2Basis::Can);
    let ring = &can.ring;
    let subst = FlatSubstitution::new()?;
    let target_sys = build_f2_can_r();
    let tring = &subst.target;

    // vector-field change: r2 d/dr2 = q2 d/dq2,
    // r1 d/dr1 = -s (q1 d/dq1) + (1+s)/2 (q2 d/dq2)
    let minus_s = ring.neg(&ring.s());
    let half_one_plus_s = ring.mul(
        &ring.from_rational(&Rational::new(1, 2)),
        &ring.add(&ring.one(), &ring.s()),
    );
    let combine = |a: &EMat, b: &EMat| -> EMat {
        matrix::add(
            ring,
            &matrix::scale(ring, a, &minus_s),
            &matrix::scale(ring, b, &half_one_plus_s),
        )
    };
    let r1_const = combine(&can.q1.0, &can.q2.0);
    let r1_lin = combine(&can.q1.1, &can.q2.1);

    let inject = |p: &Poly<Rational>| -> Frac { tring.from_poly(p.clone()) };
    let check_mat = |report: &mut Report, name: &str, src: &EMat, tgt: &Matrix<Poly<Rational>>| {
        let mut ok = true;
        for i in 0..4 {
            for j in 0..4 {
                match subst.apply(ring, src.at(i, j)) {
                    Ok(v) => {
                        if v != inject(tgt.at(i, j)) {
                            ok = false;
                        }
                    }
                    Err(_) => ok = false,
                }
            }
        }
        report.push(format!("flat coordinates reproduce {name}"), ok);
    };

    let zero4: Matrix<Poly<Rational>> = matrix::zeros(&target_sys.ring, 4, 4);
    check_mat(&mut report, "tau-linear part of tau grad_tau", &can.tau.1, &target_sys.n1);
    check_mat(&mut report, "constant part of tau grad_tau", &can.tau.0, &target_sys.n0);
    check_mat(&mut report, "r2-direction matrix", &can.q2.1, &target_sys.m1[1]);
    check_mat(&mut report, "r2-direction constant part", &can.q2.0, &zero4);
    check_mat(&mut report, "r1-direction matrix", &r1_lin, &target_sys.m1[0]);
    check_mat(&mut report, "r1-direction constant part", &r1_const, &zero4);

    // branch identity: (1 - 4 q1) - s_img^2 = 0 after substitution
    let one_minus_4q1 = {
        let vars = evars(ring);
        parse_expr(ring, vars, "1 - 4*q1")?
    };
    let lhs = subst.apply(ring, &one_minus_4q1)?;
    let rhs = tring.mul(&subst.s_img, &subst.s_img);
    report.push("branch identity (1-4q1) = s^2 in flat coordinates", lhs == rhs);

    // flatness of the distinguished fields for the residual connection.
    // In the frame (q1 d1, q2 d2) the only nonzero Christoffel data is
    // grad_{q1 d1} (q1 d1) = q1/(4q1-1) q2 d2 - 2q1/(4q1-1) q1 d1.
    let vars = evars(ring);
    let g00 = parse_expr(ring, vars, "-2*q1/(4*q1-1)")?;
    let g10 = parse_expr(ring, vars, "q1/(4*q1-1)")?;
    let q1_idx = ring.base.var_index("q1")?;
    let q2_idx = ring.base.var_index("q2")?;
    let check_flat_field = |report: &mut Report, name: &str, a: &ExtElem, b: &ExtElem| {
        // components of grad_{q_i d_i} (a q1 d1 + b q2 d2) in the frame
        let mut ok = true;
        for (var, has_gamma) in [(q1_idx, true), (q2_idx, false)] {
            let da = ring.log_derivative(a, var).expect("derivative");
            let db = ring.log_derivative(b, var).expect("derivative");
            let (c1, c2) = if has_gamma {
                (
                    ring.add(&da, &ring.mul(&g00, a)),
                    ring.add(&db, &ring.mul(&g10, a)),
                )
            } else {
                (da, db)
            };
            if !ring.is_zero(&c1) || !ring.is_zero(&c2) {
                ok = false;
            }
        }
        report.push(format!("flat vector field {name}"), ok);
    };
    // xi_1^can = -s q1 d1 + (1/2)(s + 1) q2 d2 and xi_2 = q2 d2
    check_flat_field(&mut report, "xi_1^can", &minus_s, &half_one_plus_s);
    check_flat_field(&mut report, "xi_2", &ring.zero(), &ring.one());

    Ok(report)
}

// ---------------------------------------------------------------------------
// monodromy
// ---------------------------------------------------------------------------

/// Monodromy matrices around `tau = 0`, `q2 = 0`, `q1 = 0` in the rescaled
/// `W` basis, where the `2 i pi tau` factors cancel and the result is a
/// rational unipotent matrix.
pub struct Monodromy {
    pub around_tau: Matrix<Rational>,
    pub around_q2: Matrix<Rational>,
    pub around_q1: Matrix<Rational>,
    pub report: Report,
}

pub fn monodromy() -> Result<Monodromy> {
    let omega = build_f2(F2Basis::Omega);
    let ring = &omega.ring;
    // residues: tau-linear parts at q1 = q2 = 0
    let at_origin = |m: &EMat| -> Result<Matrix<Rational>> {
        let mut out = matrix::zeros(&F, 4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let e = m.at(i, j);
                if ring.is_zero(e) {
                    continue;
                }
                let p = ring
                    .as_polynomial(e)
                    .ok_or_else(|| Error::Invalid("entry not regular at the origin".into()))?;
                out.set(i, j, ring.base.poly.coefficient_at(&p, &[0, 0, 0]));
            }
        }
        Ok(out)
    };
    // q1-direction: the constant part also vanishes at the origin; checked
    let q1_const_origin = {
        // entries carry q1/(4q1-1) factors, regular and zero at q1 = 0
        let mut ok = true;
        for i in 0..4 {
            for j in 0..4 {
                let e = omega.q1.0.at(i, j);
                if ring.is_zero(e) {
                    continue;
                }
                // multiply by (4q1-1): the numerator must vanish at q1=0
                let cleared = ring.mul(e, &parse_expr(ring, evars(ring), "4*q1-1")?);
                let p = ring
                    .as_polynomial(&cleared)
                    .ok_or_else(|| Error::Invalid("non-polynomial residue".into()))?;
                if !ring.base.poly.coefficient_at(&p, &[0, 0, 0]).is_zero() {
                    ok = false;
                }
            }
        }
        ok
    };
    let n_tau = at_origin(&omega.tau.1)?;
    let n_q2 = at_origin(&omega.q2.1)?;
    let n_q1 = at_origin(&omega.q1.1)?;
    let around_tau = matrix::exp_nilpotent(&F, &n_tau)?;
    let around_q2 = matrix::exp_nilpotent(&F, &n_q2)?;
    let around_q1 = matrix::exp_nilpotent(&F, &n_q1)?;

    let mut report = Report::default();
    report.push("residue eigenvalues vanish at q1 = 0", q1_const_origin);
    report.push(
        "M_{q2=0}^2 = M_{tau=0}",
        matrix::mul(&F, &around_q2, &around_q2) == around_tau,
    );
    // non-cyclicity: minimal polynomial degree < 4, i.e. (M - I)^3 = 0
    let min_poly_small = |m: &Matrix<Rational>| -> bool {
        let id = matrix::identity(&F, 4);
        let n = matrix::sub(&F, m, &id);
        let n3 = matrix::mul(&F, &matrix::mul(&F, &n, &n), &n);
        matrix::is_zero(&F, &n3)
    };
    report.push("M_{tau=0} is not cyclic", min_poly_small(&around_tau));
    report.push("M_{q2=0} is not cyclic", min_poly_small(&around_q2));
    report.push("M_{q1=0} is not cyclic", min_poly_small(&around_q1));
    Ok(Monodromy { around_tau, around_q2, around_q1, report })
}

// ---------------------------------------------------------------------------
// quantum product
// ---------------------------------------------------------------------------

/// Multiplication matrices of the quantum algebra in the basis
/// `(1, f, H, f o H)`, with the intersection metric.
pub struct F2ProductTable {
    pub ring: PolyRing<RationalField>,
    pub f_mult: Matrix<Poly<Rational>>,
    pub h_mult: Matrix<Poly<Rational>>,
    pub pairing: Matrix<Poly<Rational>>,
    pub report: Report,
}

pub fn f2_quantum_product() -> Result<F2ProductTable> {
    let sys = build_f2_can_r();
    let ring = sys.ring.clone();
    let vars = |n: &str| ring.var_by_name(n).ok();
    // gamma: 1 -> e0, f -> e3, H -> -e1, H o f -> e2 + r1 r2 e0
    let gamma = parse_matrix(
        &ring,
        vars,
        &[
            &["1", "0", "0", "r1*r2"],
            &["0", "0", "-1", "0"],
            &["0", "0", "0", "1"],
            &["0", "1", "0", "0"],
        ],
    )?;
    let gamma_inv = matrix::try_inverse(&ring, &gamma)?;
    let conj = |m: &Matrix<Poly<Rational>>| {
        matrix::mul(&ring, &matrix::mul(&ring, &gamma_inv, m), &gamma)
    };
    // theta grad at theta = 0 is the tau-linear matrix as stored
    let f_mult = conj(&sys.m1[0]);
    let h_mult = conj(&sys.m1[1]);
    let pairing = matrix::mul(
        &ring,
        &matrix::mul(&ring, &gamma.transpose(), &sys.pairing),
        &gamma,
    );

    let mut report = Report::default();
    let expect_f = parse_matrix(
        &ring,
        vars,
        &[
            &["0", "r1*r2", "0", "0"],
            &["1", "0", "0", "0"],
            &["0", "0", "0", "r1*r2"],
            &["0", "0", "1", "0"],
        ],
    )?;
    let expect_h = parse_matrix(
        &ring,
        vars,
        &[
            &["0", "0", "r2*(1-r1)", "0"],
            &["0", "0", "0", "r2*(1-r1)"],
            &["1", "0", "0", "2*r1*r2"],
            &["0", "1", "2", "0"],
        ],
    )?;
    let expect_g = parse_matrix(
        &ring,
        vars,
        &[
            &["0", "0", "0", "1"],
            &["0", "0", "1", "0"],
            &["0", "1", "2", "0"],
            &["1", "0", "0", "2*r1*r2"],
        ],
    )?;
    report.push("f-multiplication matrix as printed", f_mult == expect_f);
    report.push("H-multiplication matrix as printed", h_mult == expect_h);
    report.push("intersection metric as printed", pairing == expect_g);
    report.push(
        "commutativity [f, H] = 0",
        matrix::is_zero(&ring, &matrix::commutator(&ring, &f_mult, &h_mult)),
    );
    // associativity on the full algebra: the four multiplication operators
    // I, F, H, FH pairwise commute and satisfy the structure relations
    let fh = matrix::mul(&ring, &f_mult, &h_mult);
    report.push(
        "associativity (f o f) structure",
        matrix::mul(&ring, &f_mult, &f_mult)
            == matrix::scale(&ring, &matrix::identity(&ring, 4), &parse_expr(&ring, vars, "r1*r2")?),
    );
    let h2 = matrix::mul(&ring, &h_mult, &h_mult);
    let h2_expect = matrix::add(
        &ring,
        &matrix::scale(
            &ring,
            &matrix::identity(&ring, 4),
            &parse_expr(&ring, vars, "r2*(1-r1)")?,
        ),
        &matrix::scale(&ring, &fh, &ring.from_i64(2)),
    );
    report.push("associativity (H o H) structure", h2 == h2_expect);
    // Frobenius
    let frob = |m: &Matrix<Poly<Rational>>| {
        matrix::mul(&ring, &m.transpose(), &pairing) == matrix::mul(&ring, &pairing, m)
    };
    report.push("Frobenius for f", frob(&f_mult));
    report.push("Frobenius for H", frob(&h_mult));
    // normalization g(f,H) = 1, g(H,H) = 2, g(1, H o f) = 1
    report.push(
        "metric normalization",
        *pairing.at(1, 2) == ring.one()
            && *pairing.at(2, 2) == ring.from_i64(2)
            && *pairing.at(0, 3) == ring.one(),
    );
    // H o (H - 2f) = r2 (1 - r1) 1
    let lhs = matrix::mul(
        &ring,
        &h_mult,
        &matrix::sub(&ring, &h_mult, &matrix::scale(&ring, &f_mult, &ring.from_i64(2))),
    );
    let rhs = matrix::scale(
        &ring,
        &matrix::identity(&ring, 4),
        &parse_expr(&ring, vars, "r2*(1-r1)")?,
    );
    report.push("H o (H - 2f) = r2 (1 - r1)", lhs == rhs);
    Ok(F2ProductTable { ring, f_mult, h_mult, pairing, report })
}

// ---------------------------------------------------------------------------
// crepant limit
// ---------------------------------------------------------------------------

type GPoly = Poly<GaussianRational>;

pub struct CrepantReport {
    pub ring: PolyRing<GaussianField>,
    /// matrix after the basis change at `r1 = -1`, in the variable `r2`
    pub intermediate: Matrix<GPoly>,
    /// final matrix in the formal variable `Q` for `q^{1/2}`
    pub limit: Matrix<GPoly>,
    /// images of `(1, f, H, H o f)` in the basis `(1, p, p^2, 1_{1/2})`
    pub correspondence: Vec<Vec<GPoly>>,
    pub report: Report,
}

/// Specializes `-(1/2) theta r2 grad_{r2}` at `r1 = -1`, conjugates into the
/// orbifold basis `(w0, w1/2, w2/2, i w3 + i/2 w1)` and substitutes
/// `r2 = -i Q`; the result is the small quantum multiplication of the
/// weighted projective plane P(1,1,2).
pub fn crepant_limit() -> Result<CrepantReport> {
    let sys = build_f2_can_r();
    let gring = PolyRing::new(GaussianField, &["r2", "Q"]);
    let gf = GaussianField;
    let r_ring = &sys.ring;
    let r1_idx = 0usize;

    // -(1/2) tau-linear part of r2 grad_{r2}, coefficients into Q(i),
    // r1 specialized to -1
    let minus_one = GaussianRational::from_rational(Rational::from(-1));
    let lift = |p: &Poly<Rational>| -> GPoly {
        // substitute r1 = -1, r2 -> r2 within the Gaussian ring
        let imgs = vec![gring.constant(minus_one.clone()), gring.var(0)];
        r_ring.subst_into(p, &gring, &|c: &Rational| gring.constant(gf.from_rational(c)), &imgs)
    };
    let _ = r1_idx;
    let a = sys.m1[1].map(|p| {
        let v = lift(p);
        gring.mul(&v, &gring.from_rational(&Rational::new(-1, 2)))
    });

    // basis change (w0, 1/2 w1, 1/2 w2, i w3 + i/2 w1)
    let i = gring.constant(GaussianRational::i());
    let half = gring.from_rational(&Rational::new(1, 2));
    let mut basis = matrix::zeros(&gring, 4, 4);
    basis.set(0, 0, gring.one());
    basis.set(1, 1, half.clone());
    basis.set(2, 2, half.clone());
    basis.set(3, 3, i.clone());
    basis.set(1, 3, gring.mul(&i, &half));
    let basis_inv = matrix::try_inverse(&gring, &basis)?;
    let intermediate = matrix::mul(&gring, &matrix::mul(&gring, &basis_inv, &a), &basis);

    let mut report = Report::default();
    report.push(
        "intermediate matrix at r1 = -1",
        intermediate == expect_i_matrix(&gring)?,
    );

    // substitute r2 = -i Q
    let q_var = gring.var(1);
    let minus_i_q = gring.mul(&gring.constant(GaussianRational::new(
        Rational::zero(),
        Rational::from(-1),
    )), &q_var);
    let subst_r2 = |p: &GPoly| -> GPoly {
        gring.subst_into(
            p,
            &gring,
            &|c: &GaussianRational| gring.constant(c.clone()),
            &[minus_i_q.clone(), q_var.clone()],
        )
    };
    let limit = intermediate.map(&subst_r2);
    let expect_limit = {
        let q_half = gring.mul(&gring.var(1), &half);
        let mut m = matrix::zeros(&gring, 4, 4);
        m.set(0, 3, q_half.clone());
        m.set(1, 0, gring.one());
        m.set(2, 1, gring.one());
        m.set(3, 2, q_half);
        m
    };
    report.push("P(1,1,2) small quantum multiplication", limit == expect_limit);

    // basis correspondence: gamma images at the limit, in the (1,p,p^2,1_{1/2})
    // coordinates. gamma(1) = e0, gamma(f) = e3, gamma(H) = -e1,
    // gamma(H o f) = e2 + r1 r2 e0 with r1 r2 = i Q at the limit.
    let iq = gring.mul(&i, &q_var);
    let cols: Vec<Vec<GPoly>> = vec![
        vec![gring.one(), gring.zero(), gring.zero(), gring.zero()],
        {
            let mut v = vec![gring.zero(); 4];
            v[3] = gring.one();
            v
        },
        {
            let mut v = vec![gring.zero(); 4];
            v[1] = gring.neg(&gring.one());
            v
        },
        {
            let mut v = vec![gring.zero(); 4];
            v[2] = gring.one();
            v[0] = iq;
            v
        },
    ];
    let correspondence: Vec<Vec<GPoly>> = cols
        .into_iter()
        .map(|v| matrix::mul_vec(&gring, &basis_inv, &v))
        .collect();
    // 1 -> 1, f -> -p - i 1_{1/2}, H -> -2p, H o f -> 2 p^2 + i Q
    let expect: Vec<Vec<GPoly>> = vec![
        vec![gring.one(), gring.zero(), gring.zero(), gring.zero()],
        vec![
            gring.zero(),
            gring.neg(&gring.one()),
            gring.zero(),
            gring.neg(&i),
        ],
        vec![gring.zero(), gring.from_i64(-2), gring.zero(), gring.zero()],
        vec![
            gring.mul(&i, &gring.var(1)),
            gring.zero(),
            gring.from_i64(2),
            gring.zero(),
        ],
    ];
    report.push("basis correspondence", correspondence == expect);
    Ok(CrepantReport { ring: gring, intermediate, limit, correspondence, report })
}

fn expect_i_matrix(gring: &PolyRing<GaussianField>) -> Result<Matrix<GPoly>> {
    let i = gring.constant(GaussianRational::i());
    let half = gring.from_rational(&Rational::new(1, 2));
    let ir2_half = gring.mul(&gring.mul(&i, &gring.var(0)), &half);
    let mut m = matrix::zeros(gring, 4, 4);
    m.set(0, 3, ir2_half.clone());
    m.set(1, 0, gring.one());
    m.set(2, 1, gring.one());
    m.set(3, 2, ir2_half);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_basis_passes_all_checks() {
        let conn = build_f2(F2Basis::Omega);
        let report = verify_f2(&conn).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(euler_identity(&conn));
    }

    #[test]
    fn derived_bases_match_printed_matrices() {
        for basis in [F2Basis::Triangle, F2Basis::Flat, F2Basis::Can] {
            let conn = build_f2(basis);
            let report = verify_f2(&conn).unwrap();
            assert!(report.all_pass(), "{basis:?}: {report:?}");
        }
    }

    #[test]
    fn perturbed_entry_breaks_curvature() {
        let mut conn = build_f2(F2Basis::Omega);
        let one = conn.ring.one();
        conn.q2.1.set(0, 0, one);
        let report = verify_f2(&conn).unwrap();
        assert!(!report.all_pass());
    }

    #[test]
    fn can_r_system_is_flat_and_integrable() {
        let sys = build_f2_can_r();
        assert!(sys.is_flat());
        let rep = check_integrability(&sys).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        let rep = check_pairing(&sys).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn flat_coordinates() {
        let report = flat_coordinate_check().unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn monodromy_matrices() {
        let m = monodromy().unwrap();
        assert!(m.report.all_pass(), "{:?}", m.report);
        let q = |n: i64| Rational::from(n);
        let expect_q2 = Matrix::from_rows(vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(-1), q(1), q(0), q(0)],
            vec![q(1), q(-2), q(1), q(-1)],
            vec![q(0), q(0), q(0), q(1)],
        ]);
        assert_eq!(m.around_q2, expect_q2);
        let expect_q1 = Matrix::from_rows(vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(-1), q(1), q(0)],
            vec![q(-1), q(0), q(0), q(1)],
        ]);
        assert_eq!(m.around_q1, expect_q1);
    }

    #[test]
    fn product_table() {
        let table = f2_quantum_product().unwrap();
        assert!(table.report.all_pass(), "{:?}", table.report);
    }

    #[test]
    fn crepant() {
        let rep = crepant_limit().unwrap();
        assert!(rep.report.all_pass(), "{:?}", rep.report);
    }

    #[test]
    fn tau_derivative_of_omega_matrix_structure() {
        // d/dq2 of the tau-part of tau grad_tau: only entries containing q2
        // survive, term by term
        let conn = build_f2(F2Basis::Omega);
        let ring = &conn.ring;
        let q2 = ring.base.var_index("q2").unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = conn.tau.1.at(i, j);
                let d = ring.partial(e, q2).unwrap();
                let has_q2 = !ring.is_zero(e)
                    && ring
                        .as_polynomial(e)
                        .map(|p| p.degree_in(q2).unwrap_or(0) > 0)
                        .unwrap_or(false);
                assert_eq!(
                    !ring.is_zero(&d),
                    has_q2,
                    "entry ({i},{j}) derivative structure"
                );
            }
        }
    }
}
