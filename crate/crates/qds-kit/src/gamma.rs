//! Rational-structure constants from Gamma-function expansions.
//!
//! Two independent routes are computed and cross-checked: the Laurent
//! expansion of the mirror Gamma products (read off pole coefficients), and
//! the Gamma-class route through truncated cohomology polynomials. The
//! conjugation operator fixed by the resulting lattice is assembled from the
//! constant flat vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::wps::WeightData;

// ---------------------------------------------------------------------------
// scalar special functions
// ---------------------------------------------------------------------------

/// Lanczos coefficients (g = 10.900511), good to ~16 digits.
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const GAMMA_R: f64 = 10.900511;
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657;

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> f64 {
    assert!(x > 0.0, "gamma requires a positive argument");
    if x < 0.5 {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, t)| s + t / (i as f64 - x));
        std::f64::consts::PI
            / ((std::f64::consts::PI * x).sin()
                * s
                * TWO_SQRT_E_OVER_PI
                * ((0.5 - x + GAMMA_R) / std::f64::consts::E).powf(0.5 - x))
    } else {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, t)| s + t / (x + i as f64 - 1.0));
        s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).powf(x - 0.5)
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    gamma(x).ln()
}

/// Digamma by upward recurrence into the asymptotic regime.
pub fn digamma(mut x: f64) -> f64 {
    assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic expansion with Bernoulli terms through B_14
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 * inv - series
}

/// Hurwitz zeta `zeta(k, b) = sum_{i>=0} (i+b)^{-k}` for integer `k >= 2`,
/// by direct summation of 50 terms plus an Euler-Maclaurin tail through the
/// `B_6` term.
pub fn hurwitz_zeta(k: u32, b: f64) -> f64 {
    assert!(k >= 2 && b > 0.0);
    let n = 50usize;
    let kf = k as f64;
    let mut sum = 0.0;
    for i in 0..n {
        sum += (i as f64 + b).powi(-(k as i32));
    }
    let t = n as f64 + b;
    // integral + half-term
    sum += t.powf(1.0 - kf) / (kf - 1.0);
    sum += 0.5 * t.powf(-kf);
    // B2 term
    sum += kf / 12.0 * t.powf(-kf - 1.0);
    // B4 term
    sum -= kf * (kf + 1.0) * (kf + 2.0) / 720.0 * t.powf(-kf - 3.0);
    // B6 term
    sum += kf * (kf + 1.0) * (kf + 2.0) * (kf + 3.0) * (kf + 4.0) / 30240.0 * t.powf(-kf - 5.0);
    sum
}

// ---------------------------------------------------------------------------
// numeric series
// ---------------------------------------------------------------------------

/// Truncated Taylor series over f64.
#[derive(Clone, Debug)]
pub struct RealSeries(pub Vec<f64>);

impl RealSeries {
    pub fn mul(&self, other: &RealSeries, order: usize) -> RealSeries {
        let mut out = vec![0.0; order];
        for (i, a) in self.0.iter().enumerate().take(order) {
            for (j, b) in other.0.iter().enumerate() {
                if i + j >= order {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        RealSeries(out)
    }

    /// `exp` of a series, term-by-term: `E' = L' E`.
    pub fn exp(&self, order: usize) -> RealSeries {
        let mut out = vec![0.0; order];
        out[0] = self.0[0].exp();
        for k in 1..order {
            let mut acc = 0.0;
            for j in 1..=k {
                let lj = self.0.get(j).copied().unwrap_or(0.0);
                acc += j as f64 * lj * out[k - j];
            }
            out[k] = acc / k as f64;
        }
        RealSeries(out)
    }

    /// substitutes `x -> c x`.
    pub fn scale_var(&self, c: f64) -> RealSeries {
        let mut p = 1.0;
        RealSeries(
            self.0
                .iter()
                .map(|a| {
                    let v = a * p;
                    p *= c;
                    v
                })
                .collect(),
        )
    }
}

/// Numeric Laurent series `sum_{k >= lead} c_{k} s^k`.
#[derive(Clone, Debug)]
pub struct LaurentSeriesNumeric {
    pub lead: i32,
    pub coeffs: Vec<f64>,
}

impl LaurentSeriesNumeric {
    pub fn coeff(&self, k: i32) -> f64 {
        if k < self.lead {
            return 0.0;
        }
        self.coeffs.get((k - self.lead) as usize).copied().unwrap_or(0.0)
    }

    pub fn mul(&self, other: &Self, keep: usize) -> Self {
        let lead = self.lead + other.lead;
        let mut coeffs = vec![0.0; keep];
        for (i, a) in self.coeffs.iter().enumerate().take(keep) {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= keep {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        LaurentSeriesNumeric { lead, coeffs }
    }

    pub fn scale(&self, c: f64) -> Self {
        LaurentSeriesNumeric {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }
}

/// Taylor coefficients of `Gamma(b + x)` to the given order, through the
/// log-Gamma series `log G = log G(b) + psi(b) x + sum (-1)^k zeta(k,b) x^k/k`.
pub fn gamma_series(b: &Rational, order: usize) -> Result<RealSeries> {
    let bf = b.to_f64();
    if bf <= 0.0 {
        return Err(Error::NonPositiveArgument(bf));
    }
    let mut log = vec![0.0; order.max(1)];
    log[0] = ln_gamma(bf);
    if order > 1 {
        log[1] = digamma(bf);
    }
    for (k, slot) in log.iter_mut().enumerate().skip(2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * hurwitz_zeta(k as u32, bf) / k as f64;
    }
    Ok(RealSeries(log).exp(order.max(1)))
}

/// Laurent expansion of `Gamma(c s + b)` for `b >= 0`; a pole appears exactly
/// when `b = 0`, handled by `Gamma(z) = Gamma(z + 1)/z`.
fn gamma_factor(c: f64, b: &Rational, order: usize) -> Result<LaurentSeriesNumeric> {
    if b.is_zero() {
        let taylor = gamma_series(&Rational::one(), order)?.scale_var(c);
        // divide by (c s)
        let coeffs = taylor.0.iter().map(|v| v / c).collect();
        Ok(LaurentSeriesNumeric { lead: -1, coeffs })
    } else {
        let taylor = gamma_series(b, order)?.scale_var(c);
        Ok(LaurentSeriesNumeric { lead: 0, coeffs: taylor.0 })
    }
}

// ---------------------------------------------------------------------------
// the Gamma structure of a weight vector
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GammaStructure {
    pub wd: WeightData,
    /// `psi0[j][i-1] = Psi^j_{i,0}` for `i = 1..d_j`
    pub psi0: Vec<Vec<f64>>,
    /// constant flat vectors, `vectors[l][slot]`
    pub vectors: Vec<Vec<Complex64>>,
    /// Gamma-class coefficients per block, `gamma_hat[j][i] = [p^i]`
    pub gamma_hat: Vec<Vec<f64>>,
    /// the same vectors through the Gamma-class route
    pub vectors_hat: Vec<Vec<Complex64>>,
    /// conjugation matrix `C` with `conj(v) = C conj_entrywise(v)`
    pub conjugation: Vec<Vec<Complex64>>,
    /// max componentwise deviation between the two routes
    pub route_deviation: f64,
    /// max deviation of `C conj(C)` from the identity
    pub involution_deviation: f64,
}

/// Pole expansions of theorem-level Gamma products; `psi0[j]` lists
/// `Psi^j_{1,0} .. Psi^j_{d_j,0}`.
pub fn psi_constants(wd: &WeightData) -> Result<Vec<Vec<f64>>> {
    let n = wd.n();
    let r = wd.r.to_f64();
    let mut out = Vec::with_capacity(wd.num_blocks());
    for j in 0..wd.num_blocks() {
        let dj = wd.block_sizes[j];
        let order = dj + 3;
        let mut product = LaurentSeriesNumeric { lead: 0, coeffs: vec![1.0; 1] };
        product.coeffs.resize(order, 0.0);
        let mut pole_count = 0usize;
        if j == 0 {
            // w_1..w_n * prod_{m=0..n} Gamma(w_m r s)
            let w: f64 = wd.weights.iter().skip(1).map(|&w| w as f64).product();
            product = product.scale(w);
            for &wm in &wd.weights {
                let factor = gamma_factor(wm as f64 * r, &Rational::zero(), order)?;
                pole_count += 1;
                product = product.mul(&factor, order);
            }
        } else {
            // b_j Gamma(r s + f_j) prod_{m=1..n} Gamma(w_m r s + kappa_m)
            product = product.scale(wd.b[j].to_f64());
            let f0 = gamma_factor(r, &wd.f[j], order)?;
            product = product.mul(&f0, order);
            let idx = wd.mu + n + 1 - wd.partial_sums[j];
            let a = &wd.a_seq[idx];
            for m in 1..=n {
                let wm = wd.weights[m];
                // kappa_m = a_m - w_m (1 - f_j) >= 0
                let kappa = &Rational::from(a[m])
                    - &(&Rational::from(wm) * &(&Rational::one() - &wd.f[j]));
                if kappa.is_negative() {
                    return Err(Error::Invalid(format!(
                        "negative Gamma offset in block {j}: {kappa}"
                    )));
                }
                if kappa.is_zero() {
                    pole_count += 1;
                }
                let factor = gamma_factor(wm as f64 * r, &kappa, order)?;
                product = product.mul(&factor, order);
            }
            // the pole order must match the block size
            if pole_count != dj {
                return Err(Error::Invalid(format!(
                    "block {j}: pole count {pole_count} does not equal d_j = {dj}"
                )));
            }
        }
        // Psi^j_{i,0} = r^{d_j + 1 - i} [s^{-(d_j+1-i)}] G_j
        let mut psi = Vec::with_capacity(dj);
        for i in 1..=dj {
            let m = (dj - i) as i32;
            let v = product.coeff(-m - 1) * r.powi(m + 1);
            psi.push(v);
        }
        out.push(psi);
    }
    Ok(out)
}

/// Closed formula `Psi^j_{1,0} = b_j prod_{C_j} 1/w_m prod_m Gamma(1 - {w_m f_j})`.
pub fn psi_one_closed_form(wd: &WeightData, j: usize) -> f64 {
    let mut acc = wd.b[j].to_f64();
    for &m in &wd.c_sets[j] {
        acc /= wd.weights[m] as f64;
    }
    for &w in &wd.weights {
        let frac = (&Rational::from(w) * &wd.f[j]).frac_ceil();
        acc *= gamma(1.0 - frac.to_f64());
    }
    acc
}

/// Phase convolution `Psi^j_{i,l} = e^{2 pi i l f_j} sum_m ((-2 pi i l)^m / m!) Psi^j_{i-m,0}`.
pub fn psi_vectors(wd: &WeightData, psi0: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    let mu = wd.mu;
    let mut vectors = Vec::with_capacity(mu);
    for l in 0..mu {
        let mut v = vec![Complex64::new(0.0, 0.0); mu];
        for j in 0..wd.num_blocks() {
            let phase = (Complex64::new(0.0, 2.0 * std::f64::consts::PI)
                * wd.f[j].to_f64()
                * l as f64)
                .exp();
            let z = Complex64::new(0.0, -2.0 * std::f64::consts::PI) * l as f64;
            for i in 1..=wd.block_sizes[j] {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut zpow = Complex64::new(1.0, 0.0);
                let mut mfact = 1.0;
                for m in 0..i {
                    acc += zpow / mfact * psi0[j][i - m - 1];
                    zpow *= z;
                    mfact *= (m + 1) as f64;
                }
                v[wd.slot(j, i)] = phase * acc;
            }
        }
        vectors.push(v);
    }
    vectors
}

/// The Gamma-class coefficients per block: Taylor expansion of
/// `prod_{m=0..n} Gamma(w_m p + 1 - {w_m f_j})` truncated at `p^{d_j}`.
///
/// The class is expanded in the unscaled variable `p`; the extra `r`-power
/// per cohomological degree that a literal reading would insert breaks the
/// agreement with the pole route whenever `r != 1`.
pub fn gamma_hat_classes(wd: &WeightData) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(wd.num_blocks());
    for j in 0..wd.num_blocks() {
        let dj = wd.block_sizes[j];
        let mut acc = RealSeries(vec![1.0]);
        acc.0.resize(dj, 0.0);
        for &w in &wd.weights {
            let frac = (&Rational::from(w) * &wd.f[j]).frac_ceil();
            let b = &Rational::one() - &frac;
            let factor = gamma_series(&b, dj)?.scale_var(w as f64);
            acc = acc.mul(&factor, dj);
        }
        out.push(acc.0);
    }
    Ok(out)
}

/// Assembles the constant vectors from the Gamma classes: per block `j`,
/// `sum_i [p^{i-1}](e^{2 pi i l f_j} exp(-2 pi i l p) GammaHat_j)` placed at
/// slot `p_{j-1} + i - 1` with the `s_j^{-1}` mirror normalization.
pub fn gamma_hat_route(wd: &WeightData, classes: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    let mu = wd.mu;
    let mut vectors = Vec::with_capacity(mu);
    for l in 0..mu {
        let mut v = vec![Complex64::new(0.0, 0.0); mu];
        for j in 0..wd.num_blocks() {
            let dj = wd.block_sizes[j];
            let phase = (Complex64::new(0.0, 2.0 * std::f64::consts::PI)
                * wd.f[j].to_f64()
                * l as f64)
                .exp();
            let z = Complex64::new(0.0, -2.0 * std::f64::consts::PI) * l as f64;
            let s_inv = wd.s[j].recip().expect("s_j is nonzero").to_f64();
            // cup with exp(-2 pi i l p): convolution against z^m/m!
            for i in 1..=dj {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut zpow = Complex64::new(1.0, 0.0);
                let mut mfact = 1.0;
                for m in 0..i {
                    acc += zpow / mfact * classes[j][i - 1 - m];
                    zpow *= z;
                    mfact *= (m + 1) as f64;
                }
                v[wd.slot(j, i)] = phase * acc * s_inv;
            }
        }
        vectors.push(v);
    }
    vectors
}

// small complex linear algebra
fn c_inverse(a: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                m[x][col]
                    .norm()
                    .partial_cmp(&m[y][col].norm())
                    .unwrap()
            })
            .unwrap();
        if m[pivot][col].norm() < 1e-13 {
            return Err(Error::VectorsDoNotSpan);
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r][col];
            if f.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let mc = m[col][j];
                let ic = inv[col][j];
                m[r][j] -= f * mc;
                inv[r][j] -= f * ic;
            }
        }
    }
    Ok(inv)
}

fn c_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let p = b[0].len();
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// The unique antilinear involution fixing the constant vectors, as the
/// matrix `C = V conj(V)^{-1}` acting by `v |-> C conj(v)`.
pub fn conjugation(vectors: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let mu = vectors.len();
    // columns are the vectors
    let v: Vec<Vec<Complex64>> = (0..mu)
        .map(|i| (0..mu).map(|l| vectors[l][i]).collect())
        .collect();
    let v_conj: Vec<Vec<Complex64>> = v
        .iter()
        .map(|row| row.iter().map(|z| z.conj()).collect())
        .collect();
    let inv = c_inverse(&v_conj)?;
    Ok(c_mul(&v, &inv))
}

pub fn involution_deviation(c: &[Vec<Complex64>]) -> f64 {
    let n = c.len();
    let c_conj: Vec<Vec<Complex64>> = c
        .iter()
        .map(|row| row.iter().map(|z| z.conj()).collect())
        .collect();
    let prod = c_mul(c, &c_conj);
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            max = max.max((prod[i][j] - expect).norm());
        }
    }
    max
}

/// Builds the full Gamma structure with both routes and the conjugation.
pub fn build_gamma_structure(wd: &WeightData) -> Result<GammaStructure> {
    let psi0 = psi_constants(wd)?;
    let vectors = psi_vectors(wd, &psi0);
    let gamma_hat = gamma_hat_classes(wd)?;
    let vectors_hat = gamma_hat_route(wd, &gamma_hat);
    let mut route_deviation = 0.0f64;
    for l in 0..wd.mu {
        for k in 0..wd.mu {
            route_deviation = route_deviation.max((vectors[l][k] - vectors_hat[l][k]).norm());
        }
    }
    let conj = conjugation(&vectors)?;
    let involution_deviation = involution_deviation(&conj);
    Ok(GammaStructure {
        wd: wd.clone(),
        psi0,
        vectors,
        gamma_hat,
        vectors_hat,
        conjugation: conj,
        route_deviation,
        involution_deviation,
    })
}

/// Checks the block relations of the conjugation: for every block `j` and
/// `0 <= m < d_j`,
/// `sum_i Psi^j_{i,0} conj(omega_{slot(j, i+m)}) = (-1)^m sum_i Psi^{c(j)}_{i,0} omega_{slot(c(j), i+m)}`.
pub fn conjugation_block_deviation(gs: &GammaStructure) -> f64 {
    let wd = &gs.wd;
    let mu = wd.mu;
    let mut max = 0.0f64;
    for j in 0..wd.num_blocks() {
        let dj = wd.block_sizes[j];
        let cj = wd.block_pairing[j];
        for m in 0..dj {
            // lhs: sum over i with i + m <= d_j of Psi^j_{i,0} * C e_{slot(j,i+m)}
            let mut lhs = vec![Complex64::new(0.0, 0.0); mu];
            let mut rhs = vec![Complex64::new(0.0, 0.0); mu];
            for i in 1..=dj - m {
                let col = wd.slot(j, i + m);
                for k in 0..mu {
                    lhs[k] += gs.conjugation[k][col] * gs.psi0[j][i - 1];
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                rhs[wd.slot(cj, i + m)] += Complex64::new(sign * gs.psi0[cj][i - 1], 0.0);
            }
            for k in 0..mu {
                max = max.max((lhs[k] - rhs[k]).norm());
            }
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wps::build_weight_data;

    const EULER_GAMMA: f64 = 0.5772156649015329;

    #[test]
    fn classical_gamma_values() {
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((gamma(1.0 / 3.0) * gamma(2.0 / 3.0) - 2.0 * std::f64::consts::PI / 3.0f64.sqrt())
            .abs()
            < 1e-12);
        assert!((gamma(5.0) - 24.0).abs() < 1e-10);
    }

    #[test]
    fn zeta_2_is_pi_squared_over_6() {
        let z = hurwitz_zeta(2, 1.0);
        assert!((z - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn digamma_at_one_is_minus_euler() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-12);
    }

    #[test]
    fn gamma_series_at_one() {
        // Gamma(1+x) = 1 - gamma x + (gamma^2/2 + pi^2/12) x^2 + ...
        let s = gamma_series(&Rational::one(), 3).unwrap();
        assert!((s.0[0] - 1.0).abs() < 1e-12);
        assert!((s.0[1] + EULER_GAMMA).abs() < 1e-12);
        let expect2 = EULER_GAMMA * EULER_GAMMA / 2.0 + std::f64::consts::PI.powi(2) / 12.0;
        assert!((s.0[2] - expect2).abs() < 1e-12);
        assert!(gamma_series(&Rational::zero(), 2).is_err());
    }

    #[test]
    fn psi_constants_projective_spaces() {
        // Psi^0_{1,0} = 1 and Psi^0_{2,0} = -(n+1) gamma
        for n in 1..=3usize {
            let wd = build_weight_data(&vec![1u32; n + 1]).unwrap();
            let psi = psi_constants(&wd).unwrap();
            assert!((psi[0][0] - 1.0).abs() < 1e-10);
            assert!((psi[0][1] + (n as f64 + 1.0) * EULER_GAMMA).abs() < 1e-9);
        }
    }

    #[test]
    fn psi_constants_123_and_122() {
        let wd = build_weight_data(&[1, 2, 3]).unwrap();
        let psi = psi_constants(&wd).unwrap();
        let g13g23 = gamma(1.0 / 3.0) * gamma(2.0 / 3.0);
        assert!((psi[1][0] - 6.0 * g13g23).abs() < 1e-8);
        assert!((psi[2][0] - 18.0 * std::f64::consts::PI).abs() < 1e-8);
        assert!((psi[3][0] - 36.0 * g13g23).abs() < 1e-8);

        let wd = build_weight_data(&[1, 2, 2]).unwrap();
        let psi = psi_constants(&wd).unwrap();
        assert!((psi[1][0] - 4.0 * std::f64::consts::PI.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn closed_formula_matches_expansion() {
        for w in [vec![1u32, 2], vec![1, 2, 2], vec![1, 2, 3], vec![1, 2, 5]] {
            let wd = build_weight_data(&w).unwrap();
            let psi = psi_constants(&wd).unwrap();
            for j in 1..wd.num_blocks() {
                let closed = psi_one_closed_form(&wd, j);
                assert!(
                    (psi[j][0] - closed).abs() < 1e-9 * closed.abs().max(1.0),
                    "closed formula fails for {w:?} block {j}"
                );
            }
        }
    }

    #[test]
    fn phase_vectors() {
        // weights (1,2): Psi^1_{1,l} = e^{i pi l} Psi^1_{1,0}
        let wd = build_weight_data(&[1, 2]).unwrap();
        let psi0 = psi_constants(&wd).unwrap();
        let vecs = psi_vectors(&wd, &psi0);
        for l in 0..wd.mu {
            let expect = (Complex64::new(0.0, std::f64::consts::PI) * l as f64).exp()
                * psi0[1][0];
            assert!((vecs[l][wd.slot(1, 1)] - expect).norm() < 1e-10);
        }
        // l = 0 vector is the raw constants
        for j in 0..wd.num_blocks() {
            for i in 1..=wd.block_sizes[j] {
                assert!((vecs[0][wd.slot(j, i)].re - psi0[j][i - 1]).abs() < 1e-12);
                assert!(vecs[0][wd.slot(j, i)].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_routes_agree() {
        for w in [
            vec![1u32, 1],
            vec![1, 2],
            vec![1, 2, 2],
            vec![1, 2, 3],
            vec![1, 1, 1, 1],
        ] {
            let wd = build_weight_data(&w).unwrap();
            let gs = build_gamma_structure(&wd).unwrap();
            assert!(
                gs.route_deviation < 1e-9,
                "routes disagree for {w:?}: {}",
                gs.route_deviation
            );
        }
    }

    #[test]
    fn pn_gamma_hat_is_gamma_one_plus_p_power() {
        // For P^n the only class is Gamma(1+p)^{n+1}
        let wd = build_weight_data(&[1, 1, 1]).unwrap();
        let classes = gamma_hat_classes(&wd).unwrap();
        let expect = {
            let g = gamma_series(&Rational::one(), 3).unwrap();
            g.mul(&g, 3).mul(&g, 3)
        };
        for (a, b) in classes[0].iter().zip(&expect.0) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_involution_and_blocks() {
        for w in [vec![1u32, 2], vec![1, 2, 2], vec![1, 2, 3]] {
            let wd = build_weight_data(&w).unwrap();
            let gs = build_gamma_structure(&wd).unwrap();
            assert!(gs.involution_deviation < 1e-9, "{w:?}");
            assert!(conjugation_block_deviation(&gs) < 1e-8, "{w:?}");
        }
    }

    #[test]
    fn conjugation_explicit_relations_123() {
        let wd = build_weight_data(&[1, 2, 3]).unwrap();
        let gs = build_gamma_structure(&wd).unwrap();
        let c = &gs.conjugation;
        let psi20 = gs.psi0[0][1];
        // conj(omega_3) = (Psi^3/Psi^1) omega_5
        let ratio = gs.psi0[3][0] / gs.psi0[1][0];
        assert!((c[5][3] - ratio).norm() < 1e-8);
        for k in [0, 1, 2, 3, 4] {
            assert!(c[k][3].norm() < 1e-8);
        }
        // conj(omega_4) = omega_4, conj(omega_2) = omega_2
        for fixed in [4usize, 2] {
            for k in 0..6 {
                let expect = if k == fixed { 1.0 } else { 0.0 };
                assert!((c[k][fixed] - expect).norm() < 1e-8);
            }
        }
        // conj(omega_1) = -omega_1 - 2 Psi^0_{2,0} omega_2
        assert!((c[1][1] + 1.0).norm() < 1e-8);
        assert!((c[2][1] + 2.0 * psi20).norm() < 1e-8);
        // conj(omega_0) = omega_0 + 2 Psi^0_{2,0} omega_1 + 2 (Psi^0_{2,0})^2 omega_2
        assert!((c[0][0] - 1.0).norm() < 1e-8);
        assert!((c[1][0] - 2.0 * psi20).norm() < 1e-8);
        assert!((c[2][0] - 2.0 * psi20 * psi20).norm() < 1e-8);
    }

    #[test]
    fn pn_conjugation_alternates() {
        // for P^n: C maps GammaHat cup delta(p^m) to (-1)^m itself
        let wd = build_weight_data(&[1, 1, 1]).unwrap();
        let gs = build_gamma_structure(&wd).unwrap();
        let classes = &gs.gamma_hat[0];
        let two_pi = 2.0 * std::f64::consts::PI;
        // vector of GammaHat cup delta(p^m) in the slot basis, then conjugate
        for m in 0..3usize {
            let mut v = vec![Complex64::new(0.0, 0.0); 3];
            for i in 0..3 {
                // coefficient of p^i in GammaHat * (2 i pi p)^m
                if i >= m {
                    let scale = Complex64::new(0.0, two_pi).powu(m as u32);
                    v[i] = scale * classes[i - m];
                }
            }
            // conj(v) through C
            let conj_v: Vec<Complex64> = (0..3)
                .map(|k| {
                    (0..3)
                        .map(|l| gs.conjugation[k][l] * v[l].conj())
                        .sum()
                })
                .collect();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..3 {
                assert!((conj_v[k] - v[k] * sign).norm() < 1e-8);
            }
        }
    }
}
