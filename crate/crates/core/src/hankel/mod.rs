//! Moments `A_m = sum_i lambda_i^m E_i` and their Hankel determinants
//! `D_n^m = det(A_{m+i+j})_{i,j<n}`.
//!
//! The primary route expands `D_n^m` over n-subsets of the spectrum; every
//! summand is positive, so the sum is formed in log space without
//! cancellation. The explicit Hankel matrix route is kept as an oracle.

mod identities;

use std::collections::HashMap;

pub use identities::{identity_suite, Identity, IdentityCheck, IdentityReport, SuiteConfig};

use crate::error::{Error, Result};
use crate::numkit::{det_dense, log_sum_exp, LogSumAccumulator, Matrix, Real};

/// Distinct positive rates `lambda_i` with positive weights `E_i`, stored as
/// `ln E_i`. The weights evolve as `E_i(t) = E_i(0) exp(2t / lambda_i)`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    lambda: Vec<Real>,
    log_e: Vec<Real>,
    ln_lambda: Vec<Real>,
    // ln (lambda_i - lambda_j)^2, indexed [i][j]
    ln_gap2: Vec<Vec<Real>>,
}

/// `(n, m)` addressing `D_n^m`. `D_0^m = 1`; `D_n^m = 0` for `n < 0` or `n > N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HankelIndex {
    pub n: i64,
    pub m: i64,
}

impl HankelIndex {
    pub fn new(n: i64, m: i64) -> Self {
        HankelIndex { n, m }
    }
}

impl SpectralData {
    pub fn new(lambda: Vec<Real>, log_e: Vec<Real>) -> Result<Self> {
        if lambda.len() != log_e.len() {
            return Err(Error::InvalidSpec(format!(
                "{} rates but {} weights",
                lambda.len(),
                log_e.len()
            )));
        }
        if lambda.is_empty() {
            return Err(Error::InvalidSpec("empty spectrum".into()));
        }
        if let Some(l) = lambda.iter().find(|l| !l.is_positive()) {
            return Err(Error::InvalidSpec(format!("rate {l} is not positive")));
        }
        if let Some(l) = log_e.iter().find(|l| !l.is_finite()) {
            return Err(Error::InvalidSpec(format!("log-weight {l} is not finite")));
        }
        let n = lambda.len();
        let mut ln_gap2 = vec![vec![Real::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let gap = &lambda[i] - &lambda[j];
                if gap.is_zero() {
                    return Err(Error::Degenerate(format!(
                        "rates {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
                ln_gap2[i][j] = gap.square().ln();
            }
        }
        let ln_lambda = lambda.iter().map(Real::ln).collect();
        Ok(SpectralData {
            lambda,
            log_e,
            ln_lambda,
            ln_gap2,
        })
    }

    /// Peakon parametrisation: `lambda_i = 2 / c_i`, `E_i = exp(c_i t + p_i)`.
    pub fn from_speeds(speeds: &[Real], phases: &[Real], t: &Real) -> Result<Self> {
        if speeds.len() != phases.len() {
            return Err(Error::InvalidSpec(format!(
                "{} speeds but {} phases",
                speeds.len(),
                phases.len()
            )));
        }
        if let Some(c) = speeds.iter().find(|c| !c.is_positive()) {
            return Err(Error::InvalidSpec(format!("speed {c} is not positive")));
        }
        let lambda = speeds.iter().map(|c| Real::from_i64(2) / c).collect();
        let log_e = speeds.iter().zip(phases).map(|(c, p)| c * t + p).collect();
        Self::new(lambda, log_e)
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn lambda(&self) -> &[Real] {
        &self.lambda
    }

    pub fn log_e(&self) -> &[Real] {
        &self.log_e
    }

    pub fn ln_lambda(&self) -> &[Real] {
        &self.ln_lambda
    }

    /// `ln (lambda_i - lambda_j)^2` for `i != j`.
    pub fn ln_gap2(&self, i: usize, j: usize) -> &Real {
        &self.ln_gap2[i][j]
    }

    /// Same spectrum with time advanced by `dt`.
    pub fn advanced(&self, dt: &Real) -> SpectralData {
        let mut out = self.clone();
        for (le, l) in out.log_e.iter_mut().zip(&self.lambda) {
            *le += Real::from_i64(2) * dt / l;
        }
        out
    }

    /// Every weight multiplied by `exp(log_s)`.
    pub fn scaled(&self, log_s: &Real) -> SpectralData {
        let mut out = self.clone();
        for le in &mut out.log_e {
            *le += log_s;
        }
        out
    }

    /// `ln` of the squared Vandermonde product over all rates.
    pub fn ln_vandermonde2(&self) -> Real {
        let n = self.len();
        let mut acc = Real::zero();
        for i in 0..n {
            for j in i + 1..n {
                acc += &self.ln_gap2[i][j];
            }
        }
        acc
    }
}

pub fn moment(data: &SpectralData, m: i64) -> Real {
    data.lambda
        .iter()
        .zip(&data.log_e)
        .map(|(l, le)| l.powi(m as i32) * le.exp())
        .sum()
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Subset expansion of `D_n^m` for `1 <= n <= N`, with payload
/// `sum_{i in S} 2 / lambda_i` (the log-derivative in t of each summand).
fn subset_expansion(data: &SpectralData, n: usize, m: i64) -> crate::numkit::LogSum {
    let mut acc = LogSumAccumulator::new();
    let mf = Real::from_i64(m);
    for_each_subset(data.len(), n, |s| {
        let mut log_term = Real::zero();
        let mut rate = Real::zero();
        for (a, &i) in s.iter().enumerate() {
            log_term += &mf * &data.ln_lambda[i] + &data.log_e[i];
            rate += Real::from_i64(2) / &data.lambda[i];
            for &j in &s[a + 1..] {
                log_term += &data.ln_gap2[i][j];
            }
        }
        acc.push(log_term, vec![rate]);
    });
    log_sum_exp(&acc).expect("non-empty subset sum")
}

/// `ln D_n^m`, or `None` where the determinant vanishes (`n < 0`, `n > N`).
pub fn log_hankel_det(data: &SpectralData, idx: HankelIndex) -> Option<Real> {
    match idx.n {
        n if n < 0 || n as usize > data.len() => None,
        0 => Some(Real::zero()),
        n => Some(subset_expansion(data, n as usize, idx.m).log_total),
    }
}

pub fn hankel_det(data: &SpectralData, idx: HankelIndex) -> Real {
    log_hankel_det(data, idx).map_or_else(Real::zero, |l| l.exp())
}

/// `d/dt D_n^m` at the time encoded in `data`.
pub fn hankel_det_time_deriv(data: &SpectralData, idx: HankelIndex) -> Real {
    match idx.n {
        n if n <= 0 || n as usize > data.len() => Real::zero(),
        n => {
            let ls = subset_expansion(data, n as usize, idx.m);
            ls.log_total.exp() * &ls.weighted_means[0]
        }
    }
}

/// The `n x n` matrix `(A_{m+i+j})`.
pub fn hankel_matrix(data: &SpectralData, n: usize, m: i64) -> Matrix {
    let moments: Vec<Real> = (0..2 * n as i64).map(|k| moment(data, m + k)).collect();
    Matrix::from_fn(n, n, |i, j| moments[i + j].clone())
}

/// `D_n^m` by elimination on the explicit Hankel matrix.
pub fn hankel_det_naive(data: &SpectralData, idx: HankelIndex) -> Result<Real> {
    match idx.n {
        n if n < 0 => Ok(Real::zero()),
        0 => Ok(Real::one()),
        n => det_dense(&hankel_matrix(data, n as usize, idx.m)),
    }
}

/// Precomputed `D_n^m` and `d/dt D_n^m` over a rectangle of indices.
/// Lookups outside the rectangle are computed on demand.
#[derive(Clone, Debug)]
pub struct HankelTable {
    data: SpectralData,
    cache: HashMap<HankelIndex, (Real, Real)>,
}

impl HankelTable {
    pub fn new(data: &SpectralData, m_range: std::ops::RangeInclusive<i64>) -> Self {
        let mut cache = HashMap::new();
        for n in 1..=data.len() {
            for m in m_range.clone() {
                let ls = subset_expansion(data, n, m);
                let value = ls.log_total.exp();
                let deriv = &value * &ls.weighted_means[0];
                cache.insert(HankelIndex::new(n as i64, m), (value, deriv));
            }
        }
        HankelTable {
            data: data.clone(),
            cache,
        }
    }

    pub fn data(&self) -> &SpectralData {
        &self.data
    }

    pub fn d(&self, n: i64, m: i64) -> Real {
        let idx = HankelIndex::new(n, m);
        match self.cache.get(&idx) {
            Some((v, _)) => v.clone(),
            None => hankel_det(&self.data, idx),
        }
    }

    pub fn dt(&self, n: i64, m: i64) -> Real {
        let idx = HankelIndex::new(n, m);
        match self.cache.get(&idx) {
            Some((_, d)) => d.clone(),
            None => hankel_det_time_deriv(&self.data, idx),
        }
    }
}
