//! Combinatorial data attached to a weight vector `(1, w_1, ..., w_n)` of a
//! weighted projective space and its Landau-Ginzburg mirror: the residue
//! sequence `c`, the spectrum `alpha`, the block structure of the fractional
//! set, the duality index, and the Gamma-structure constants.

use crate::error::{Error, Result};
use crate::rational::{lcm_all, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightData {
    /// `w_0 = 1, w_1, ..., w_n`
    pub weights: Vec<u32>,
    /// rank `mu = 1 + w_1 + ... + w_n`
    pub mu: usize,
    /// `1 / lcm(w_0, ..., w_n)`
    pub r: Rational,
    /// fractional values `0 = f_0 < ... < f_k < 1`
    pub f: Vec<Rational>,
    /// block sizes `d_0, ..., d_k`
    pub block_sizes: Vec<usize>,
    /// partial sums `p_l = d_0 + ... + d_l`
    pub partial_sums: Vec<usize>,
    /// the inductive sequence `a(0), ..., a(mu)`
    pub a_seq: Vec<Vec<u32>>,
    /// the minimizing index `i(k)` at each step
    pub i_seq: Vec<usize>,
    /// residues `c_0, ..., c_{mu-1}` in `[0, 1)`
    pub c: Vec<Rational>,
    /// spectrum `alpha_i = i - mu c_i`
    pub alpha: Vec<Rational>,
    /// duality index map
    pub dual_index: Vec<usize>,
    /// constants `s_j`, `j = 0..k`
    pub s: Vec<Rational>,
    /// constants `b_j`, `j = 0..k`
    pub b: Vec<Rational>,
    /// subsets `C_j` of `{1..n}`, `j = 0..k`
    pub c_sets: Vec<Vec<usize>>,
    /// block pairing `c(j)` with `1 - f_j = f_{c(j)}`, `c(0) = 0`
    pub block_pairing: Vec<usize>,
}

impl WeightData {
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn num_blocks(&self) -> usize {
        self.f.len()
    }

    /// Position of block element `(j, i)` (`i` 1-based within block `j`)
    /// in the basis order.
    pub fn slot(&self, j: usize, i: usize) -> usize {
        let base = if j == 0 { 0 } else { self.partial_sums[j - 1] };
        base + (i - 1)
    }
}

pub fn build_weight_data(weights: &[u32]) -> Result<WeightData> {
    if weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    if weights[0] != 1 {
        return Err(Error::FirstWeightNotOne(weights[0]));
    }
    if weights.iter().any(|&w| w == 0) {
        return Err(Error::Invalid("weights must be positive".into()));
    }
    let n = weights.len() - 1;
    let mu: usize = weights.iter().map(|&w| w as usize).sum();
    let r = Rational::from(lcm_all(weights) as i64).recip()?;

    // fractional set F = { i/w_j : 0 <= i < w_j }
    let mut f: Vec<Rational> = Vec::new();
    for &w in weights {
        for i in 0..w {
            let v = &Rational::from(i) / &Rational::from(w);
            if !f.contains(&v) {
                f.push(v);
            }
        }
    }
    f.sort();

    // block sizes d_l = #{ j : w_j f_l integral }
    let block_sizes: Vec<usize> = f
        .iter()
        .map(|fl| {
            weights
                .iter()
                .filter(|&&w| (&Rational::from(w) * fl).is_integer())
                .count()
        })
        .collect();
    let mut partial_sums = Vec::with_capacity(block_sizes.len());
    let mut acc = 0;
    for &d in &block_sizes {
        acc += d;
        partial_sums.push(acc);
    }
    debug_assert_eq!(acc, mu);

    // inductive sequence a(k), i(k)
    let mut a_seq: Vec<Vec<u32>> = vec![vec![0; n + 1]];
    let mut i_seq: Vec<usize> = Vec::with_capacity(mu);
    let mut c: Vec<Rational> = Vec::with_capacity(mu);
    for _k in 0..mu {
        let a = a_seq.last().unwrap().clone();
        let ratios: Vec<Rational> = a
            .iter()
            .zip(weights)
            .map(|(&ai, &wi)| &Rational::from(ai) / &Rational::from(wi))
            .collect();
        let min = ratios.iter().min().unwrap().clone();
        // ties break to the smallest index
        let i_k = ratios.iter().position(|v| *v == min).unwrap();
        i_seq.push(i_k);
        c.push(min);
        let mut next = a;
        next[i_k] += 1;
        a_seq.push(next);
    }

    let alpha: Vec<Rational> = c
        .iter()
        .enumerate()
        .map(|(i, ci)| &Rational::from(i as i64) - &(&Rational::from(mu as i64) * ci))
        .collect();

    let dual_index: Vec<usize> = (0..mu)
        .map(|i| if i <= n { n - i } else { mu + n - i })
        .collect();

    // s_j = prod_r w_r^{-ceil(f_j w_r)}
    let s: Vec<Rational> = f
        .iter()
        .map(|fj| {
            let mut acc = Rational::one();
            for &w in weights {
                let e = (fj * &Rational::from(w)).ceil();
                let e = e.to_i64().expect("small exponent");
                acc = &acc * &Rational::from(w as i64).pow(-(e as i32));
            }
            acc
        })
        .collect();

    // b_j = w^{w+1} / prod_m w_m^{a(mu+n-p_j+1)_m}
    let w_pow_w_plus_1 = weights
        .iter()
        .skip(1)
        .fold(Rational::one(), |acc, &w| &acc * &Rational::from(w as i64).pow(w as i32 + 1));
    let b: Vec<Rational> = (0..f.len())
        .map(|j| {
            let idx = mu + n + 1 - partial_sums[j];
            let a = &a_seq[idx];
            let den = weights
                .iter()
                .enumerate()
                .skip(1)
                .fold(Rational::one(), |acc, (m, &w)| {
                    &acc * &Rational::from(w as i64).pow(a[m] as i32)
                });
            &w_pow_w_plus_1 / &den
        })
        .collect();

    // C_j = { m in [1, n] : w_m (1 - f_j) = a(mu+n-p_j+1)_m }
    let c_sets: Vec<Vec<usize>> = (0..f.len())
        .map(|j| {
            let idx = mu + n + 1 - partial_sums[j];
            let a = &a_seq[idx];
            (1..=n)
                .filter(|&m| {
                    let lhs = &Rational::from(weights[m]) * &(&Rational::one() - &f[j]);
                    lhs == Rational::from(a[m])
                })
                .collect()
        })
        .collect();

    let block_pairing: Vec<usize> = f
        .iter()
        .enumerate()
        .map(|(j, fj)| {
            if j == 0 {
                0
            } else {
                let target = &Rational::one() - fj;
                f.iter().position(|g| *g == target).expect("1 - f_j is in F")
            }
        })
        .collect();

    Ok(WeightData {
        weights: weights.to_vec(),
        mu,
        r,
        f,
        block_sizes,
        partial_sums,
        a_seq,
        i_seq,
        c,
        alpha,
        dual_index,
        s,
        b,
        c_sets,
        block_pairing,
    })
}

/// `s_j b_j prod_{m in C_j} 1/w_m = 1` for `j = 1..k`, exactly.
pub fn check_gamma_constant_identity(wd: &WeightData) -> bool {
    (1..wd.num_blocks()).all(|j| {
        let mut v = &wd.s[j] * &wd.b[j];
        for &m in &wd.c_sets[j] {
            v = &v / &Rational::from(wd.weights[m]);
        }
        v.is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn weights_1_2() {
        let wd = build_weight_data(&[1, 2]).unwrap();
        assert_eq!(wd.mu, 3);
        assert_eq!(wd.c, vec![q(0, 1), q(0, 1), q(1, 2)]);
        assert_eq!(wd.alpha, vec![q(0, 1), q(1, 1), q(1, 2)]);
        assert_eq!(wd.dual_index, vec![1, 0, 2]);
        assert_eq!(wd.r, q(1, 2));
    }

    #[test]
    fn weights_1_2_5_spectrum() {
        let wd = build_weight_data(&[1, 2, 5]).unwrap();
        let expect: Vec<Rational> = [
            (0, 1),
            (1, 1),
            (2, 1),
            (7, 5),
            (4, 5),
            (1, 1),
            (6, 5),
            (3, 5),
        ]
        .iter()
        .map(|&(a, b)| q(a, b))
        .collect();
        assert_eq!(wd.alpha, expect);
    }

    #[test]
    fn projective_space_case() {
        let wd = build_weight_data(&[1, 1, 1, 1]).unwrap();
        assert!(wd.c.iter().all(|c| c.is_zero()));
        let expect: Vec<Rational> = (0..4).map(|i| Rational::from(i as i64)).collect();
        assert_eq!(wd.alpha, expect);
        assert_eq!(wd.block_sizes, vec![4]);
    }

    #[test]
    fn weights_1_2_3_full_record() {
        let wd = build_weight_data(&[1, 2, 3]).unwrap();
        assert_eq!(wd.f, vec![q(0, 1), q(1, 3), q(1, 2), q(2, 3)]);
        assert_eq!(wd.block_sizes, vec![3, 1, 1, 1]);
        let expect_a: Vec<Vec<u32>> = vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![1, 1, 1],
            vec![1, 1, 2],
            vec![1, 2, 2],
            vec![1, 2, 3],
        ];
        assert_eq!(wd.a_seq, expect_a);
        assert_eq!(wd.c_sets[1], vec![2]);
        assert_eq!(wd.c_sets[2], vec![1]);
        assert_eq!(wd.c_sets[3], vec![2]);
        assert_eq!(wd.b[1], q(18, 1));
        assert_eq!(wd.b[2], q(36, 1));
        assert_eq!(wd.b[3], q(108, 1));
        assert_eq!(wd.block_pairing, vec![0, 3, 2, 1]);
        assert!(check_gamma_constant_identity(&wd));
    }

    #[test]
    fn gamma_identity_various() {
        for w in [vec![1u32, 2], vec![1, 2, 2], vec![1, 1], vec![1, 2, 5], vec![1, 3, 4]] {
            let wd = build_weight_data(&w).unwrap();
            assert!(check_gamma_constant_identity(&wd), "identity fails for {w:?}");
        }
    }

    #[test]
    fn a_seq_boundary_values() {
        let wd = build_weight_data(&[1, 2, 5]).unwrap();
        let n = wd.n();
        assert_eq!(wd.a_seq[1], vec![1, 0, 0]);
        assert_eq!(wd.a_seq[n + 1], vec![1, 1, 1]);
        assert_eq!(wd.a_seq[wd.mu], vec![1, 2, 5]);
        for (k, a) in wd.a_seq.iter().enumerate() {
            assert_eq!(a.iter().sum::<u32>() as usize, k);
        }
    }

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(build_weight_data(&[]).unwrap_err(), Error::EmptyWeights);
        assert_eq!(
            build_weight_data(&[2, 3]).unwrap_err(),
            Error::FirstWeightNotOne(2)
        );
    }

    #[test]
    fn spectrum_symmetry_and_block_invariants() {
        for w in [vec![1u32, 2], vec![1, 2, 3], vec![1, 2, 5], vec![1, 3, 3]] {
            let wd = build_weight_data(&w).unwrap();
            let n = Rational::from(wd.n() as i64);
            // multiset {alpha} = {n - alpha}
            let mut lhs: Vec<Rational> = wd.alpha.clone();
            let mut rhs: Vec<Rational> = wd.alpha.iter().map(|a| &n - a).collect();
            lhs.sort();
            rhs.sort();
            assert_eq!(lhs, rhs);
            // dual index is an involution with alpha_i + alpha_{bar i} = n
            for i in 0..wd.mu {
                let bar = wd.dual_index[i];
                assert_eq!(wd.dual_index[bar], i);
                assert_eq!(&wd.alpha[i] + &wd.alpha[bar], n);
            }
            // |C_j| = d_j for j >= 1, 1 - f_j in F, block pairing involutive
            for j in 1..wd.num_blocks() {
                assert_eq!(wd.c_sets[j].len(), wd.block_sizes[j]);
                let cj = wd.block_pairing[j];
                assert_eq!(&wd.f[cj] + &wd.f[j], Rational::one());
                assert_eq!(wd.block_pairing[cj], j);
                assert_eq!(wd.block_sizes[cj], wd.block_sizes[j]);
            }
            // c sequence equals blocks of f in order
            let mut expanded = Vec::new();
            for (j, &d) in wd.block_sizes.iter().enumerate() {
                expanded.extend(std::iter::repeat(wd.f[j].clone()).take(d));
            }
            assert_eq!(wd.c, expanded);
        }
    }
}
