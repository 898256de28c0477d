use serde::Serialize;

use super::{hirota_g, SolitonSpec, SubsetFormSpec};
use crate::error::{Error, Result};
use crate::numkit::{log_sum_exp_values, Real};

/// `ln prod_{j != i} sgn(j - i) (k_j + k_i) / (k_j - k_i)` for increasing `k`.
pub(crate) fn interaction_logs(k: &[Real]) -> Vec<Real> {
    (0..k.len())
        .map(|i| {
            (0..k.len())
                .filter(|&j| j != i)
                .map(|j| ((&k[j] + &k[i]) / (&k[j] - &k[i]).abs()).ln())
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetG {
    pub log_g1: Real,
    pub log_g2: Real,
}

/// Subset sums `g = sum_I w_I exp(2 xi_I) prod_{l in I, j notin I} sgn(j - l) (k_j + k_l) / (k_j - k_l)`
/// with `w_I = b_I` for `g1` and `a_I` for `g2`, in log domain. With `k`
/// increasing every factor is positive.
pub fn subset_g(spec: &SubsetFormSpec, y: &Real, t: &Real) -> SubsetG {
    let n = spec.len();
    let k = spec.k();
    let xi = spec.xi(y, t);
    let ln_a: Vec<Real> = spec.a().iter().map(Real::ln).collect();
    let mut cross = vec![vec![Real::zero(); n]; n];
    for l in 0..n {
        for j in 0..n {
            if j != l {
                cross[l][j] = ((&k[j] + &k[l]) / (&k[j] - &k[l]).abs()).ln();
            }
        }
    }
    let mut e1 = Vec::with_capacity(1 << n);
    let mut e2 = Vec::with_capacity(1 << n);
    for mask in 0u32..1 << n {
        let mut common = Real::zero();
        let mut la = Real::zero();
        for l in (0..n).filter(|l| mask >> l & 1 == 1) {
            common += &xi[l] * 2;
            la += &ln_a[l];
            for j in (0..n).filter(|j| mask >> j & 1 == 0) {
                common += &cross[l][j];
            }
        }
        e1.push(&common - &la);
        e2.push(common + la);
    }
    SubsetG {
        log_g1: log_sum_exp_values(&e1).expect("non-empty"),
        log_g2: log_sum_exp_values(&e2).expect("non-empty"),
    }
}

/// `(g1, g2)` by literal term-by-term evaluation, signs included.
pub fn subset_g_direct(spec: &SubsetFormSpec, y: &Real, t: &Real) -> (Real, Real) {
    let n = spec.len();
    let k = spec.k();
    let xi = spec.xi(y, t);
    let (a, b) = (spec.a(), spec.b());
    let (mut g1, mut g2) = (Real::zero(), Real::zero());
    for mask in 0u32..1 << n {
        let mut prod = Real::one();
        let (mut ai, mut bi) = (Real::one(), Real::one());
        let mut xs = Real::zero();
        for l in (0..n).filter(|l| mask >> l & 1 == 1) {
            ai *= &a[l];
            bi *= &b[l];
            xs += &xi[l];
            for j in (0..n).filter(|j| mask >> j & 1 == 0) {
                let sgn = if j > l { 1 } else { -1 };
                prod *= (&k[j] + &k[l]) / (&k[j] - &k[l]) * sgn;
            }
        }
        let e = (xs * 2).exp() * prod;
        g1 += &bi * &e;
        g2 += ai * e;
    }
    (g1, g2)
}

#[derive(Clone, Debug, Serialize)]
pub struct FormEquivalenceReport {
    /// The bilinear-form spec the subset spec maps to.
    pub hirota: SolitonSpec,
    pub samples: usize,
    /// `max |delta ln g|` over both sums, i.e. the relative deviation.
    pub max_deviation: Real,
    pub worst_y: Real,
    pub worst_t: Real,
    pub subset_at_worst: SubsetG,
    pub hirota_at_worst: SubsetG,
    pub tolerance: Real,
}

impl FormEquivalenceReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        Err(Error::Violation {
            check: "form_equivalence".into(),
            detail: format!(
                "deviation {:.6} at y = {}, t = {}: subset ln g = ({}, {}), bilinear ln g = ({}, {}); bilinear k = {:?}, y0 = {:?}",
                self.max_deviation,
                self.worst_y,
                self.worst_t,
                self.subset_at_worst.log_g1,
                self.subset_at_worst.log_g2,
                self.hirota_at_worst.log_g1,
                self.hirota_at_worst.log_g2,
                self.hirota.k(),
                self.hirota.y0()
            ),
        })
    }
}

/// Maps the subset form to bilinear form and compares `ln g1`, `ln g2` at
/// every `(y, t)` sample.
pub fn form_equivalence(spec: &SubsetFormSpec, samples: &[(Real, Real)], tolerance: &Real) -> Result<FormEquivalenceReport> {
    if samples.is_empty() {
        return Err(Error::Domain("form equivalence needs at least one sample".into()));
    }
    let hirota = spec.to_hirota(Real::zero())?;
    let mut worst: Option<(Real, usize, SubsetG, SubsetG)> = None;
    for (idx, (y, t)) in samples.iter().enumerate() {
        let s = subset_g(spec, y, t);
        let h = hirota_g(&hirota, y, t);
        let h = SubsetG { log_g1: h.log_g1, log_g2: h.log_g2 };
        let dev = (&s.log_g1 - &h.log_g1).abs().max((&s.log_g2 - &h.log_g2).abs());
        if worst.as_ref().is_none_or(|w| dev > w.0) {
            worst = Some((dev, idx, s, h));
        }
    }
    let (max_deviation, idx, subset_at_worst, hirota_at_worst) = worst.expect("non-empty samples");
    Ok(FormEquivalenceReport {
        hirota,
        samples: samples.len(),
        max_deviation,
        worst_y: samples[idx].0.clone(),
        worst_t: samples[idx].1.clone(),
        subset_at_worst,
        hirota_at_worst,
        tolerance: tolerance.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_soliton_balance() {
        let s = SubsetFormSpec::from_f64(0.5, &[0.6], &[0.0]).unwrap();
        // 2 xi = -ln b at t = 0
        let y = -s.b()[0].ln() / (&s.k()[0] * 2);
        let g = subset_g(&s, &y, &Real::zero());
        assert!(g.log_g1.approx_eq(&Real::ln2(), 1e-70));
    }

    #[test]
    fn log_form_matches_literal_sum() {
        let s = SubsetFormSpec::from_f64(0.4, &[0.3, 0.7, 1.1], &[0.2, -0.1, 0.5]).unwrap();
        for (y, t) in [("0.4", "0.1"), ("-1.3", "0"), ("1.7", "-0.6")] {
            let (y, t) = (Real::parse(y).unwrap(), Real::parse(t).unwrap());
            let g = subset_g(&s, &y, &t);
            let (g1, g2) = subset_g_direct(&s, &y, &t);
            assert!(g.log_g1.exp().approx_eq(&g1, 1e-40));
            assert!(g.log_g2.exp().approx_eq(&g2, 1e-40));
        }
    }

    #[test]
    fn equivalence_single_and_pair() {
        let tol = Real::parse("1e-38").unwrap();
        let samples: Vec<(Real, Real)> = (0..10)
            .map(|i| (Real::ratio(i - 5, 3), Real::ratio(i % 3 - 1, 2)))
            .collect();
        for s in [
            SubsetFormSpec::from_f64(0.5, &[0.6], &[0.3]).unwrap(),
            SubsetFormSpec::from_f64(0.35, &[0.4, 1.2], &[-0.3, 0.6]).unwrap(),
        ] {
            let r = form_equivalence(&s, &samples, &tol).unwrap();
            assert!(r.passed(), "{}", r.max_deviation);
        }
    }

    #[test]
    fn equivalence_failure_is_reported() {
        let s = SubsetFormSpec::from_f64(0.35, &[0.4, 1.2], &[-0.3, 0.6]).unwrap();
        let r = form_equivalence(&s, &[(Real::one(), Real::zero())], &Real::from_i64(-1)).unwrap();
        assert!(!r.passed());
        assert!(matches!(r.into_result(), Err(Error::Violation { .. })));
    }
}
