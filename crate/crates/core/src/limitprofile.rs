//! The vanishing-dispersion limit profile: piecewise exponentials joined at
//! breakpoints `xbar_n = ln(2 D_{N-n+1}^0 / D_{N-n}^2)`, plus the
//! coefficients `h_n` whose signs locate `x` among the breakpoints.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{HankelTable, SpectralData};
use crate::numkit::Real;
use crate::peakon::{peakon_state, PeakonSpec};

#[derive(Clone, Debug)]
pub struct LimitProfile {
    spec: PeakonSpec,
    t: Real,
    table: HankelTable,
    breakpoints: Vec<Real>,
    ln_vandermonde2: Real,
    ln_prod_lambda: Real,
    sum_log_e: Real,
}

pub fn build_limit_profile(spec: &PeakonSpec, t: &Real) -> Result<LimitProfile> {
    let data = spec.spectral_data(t)?;
    let table = HankelTable::new(&data, -1..=3);
    let n = spec.len() as i64;
    let two = Real::from_i64(2);
    let breakpoints: Vec<Real> = (1..=n)
        .map(|k| (&two * table.d(n - k + 1, 0) / table.d(n - k, 2)).ln())
        .collect();
    if let Some(w) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::Consistency(format!(
            "breakpoints not increasing at index {}",
            w + 1
        )));
    }
    Ok(LimitProfile {
        spec: spec.clone(),
        t: t.clone(),
        ln_vandermonde2: data.ln_vandermonde2(),
        ln_prod_lambda: data.ln_lambda().iter().sum(),
        sum_log_e: data.log_e().iter().sum(),
        table,
        breakpoints,
    })
}

impl LimitProfile {
    pub fn spec(&self) -> &PeakonSpec {
        &self.spec
    }

    pub fn t(&self) -> &Real {
        &self.t
    }

    pub fn data(&self) -> &SpectralData {
        self.table.data()
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    pub fn breakpoints(&self) -> &[Real] {
        &self.breakpoints
    }

    /// Branch index `n` in `1..=N+1` with `xbar_{n-1} < x <= xbar_n`.
    pub fn branch_of(&self, x: &Real) -> usize {
        self.breakpoints.iter().take_while(|b| x > *b).count() + 1
    }

    /// Value of branch `n` at `x`, whether or not `x` lies in that branch.
    pub fn branch_value(&self, branch: usize, x: &Real) -> Real {
        let n = self.len() as i64;
        let b = branch as i64;
        assert!((1..=n + 1).contains(&b), "branch {branch} out of range");
        if b == n + 1 {
            // 2 sum_i c_i / z_i with z_i = exp(x - c_i t - p_i)
            let spec = &self.spec;
            return spec
                .speeds()
                .iter()
                .zip(spec.phases())
                .map(|(c, p)| c * (c * &self.t + p - x).exp())
                .sum::<Real>()
                * 2;
        }
        let d = |k: i64, m: i64| self.table.d(k, m);
        (x.exp() * d(n - b, 3) + Real::from_i64(4) * (-x).exp() * d(n - b + 2, -1)) / d(n - b + 1, 1)
    }

    pub fn eval(&self, x: &Real) -> Real {
        self.branch_value(self.branch_of(x), x)
    }

    /// `ln d_n` with `d_n = prod lambda_i^{2(n-1)} / (2^n Delta_N prod E_i)`.
    fn ln_d(&self, n: i64) -> Real {
        Real::from_i64(2 * (n - 1)) * &self.ln_prod_lambda
            - Real::from_i64(n) * Real::ln2()
            - &self.ln_vandermonde2
            - &self.sum_log_e
    }

    pub fn d_coefficient(&self, n: usize) -> Real {
        self.ln_d(n as i64).exp()
    }

    /// `h_0, ..., h_{N+1}` at `x`: `h_0 = 1`,
    /// `h_n = d_n e^{(n-1)x} (e^x D_{N-n}^2 - 2 D_{N-n+1}^0)`,
    /// `h_{N+1} = -prod lambda_i^{2N} e^{Nx} / (2^N Delta_N prod E_i)`.
    pub fn h_coefficients(&self, x: &Real) -> Vec<Real> {
        let n = self.len() as i64;
        let mut h = Vec::with_capacity(n as usize + 2);
        h.push(Real::one());
        for k in 1..=n {
            let scale = (self.ln_d(k) + Real::from_i64(k - 1) * x).exp();
            let bracket = x.exp() * self.table.d(n - k, 2) - self.table.d(n - k + 1, 0) * 2;
            h.push(scale * bracket);
        }
        let ln_last = Real::from_i64(2 * n) * &self.ln_prod_lambda + Real::from_i64(n) * x
            - Real::from_i64(n) * Real::ln2()
            - &self.ln_vandermonde2
            - &self.sum_log_e;
        h.push(-ln_last.exp());
        h
    }
}

pub fn eval_limit(profile: &LimitProfile, x: &Real) -> Real {
    profile.eval(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    /// `max |limit - peakon| / peak amplitude` over the grid.
    pub max_relative: Real,
    pub worst_x: Real,
    pub peak_amplitude: Real,
    pub tolerance: Real,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.max_relative <= self.tolerance
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::Violation {
                check: "limit_peakon_equivalence".into(),
                detail: format!(
                    "relative difference {:.6} at x = {:.30} exceeds {:.3}",
                    self.max_relative, self.worst_x, self.tolerance
                ),
            })
        }
    }
}

/// Compares the limit profile against the peakon profile at time `t`.
pub fn equivalence_check(spec: &PeakonSpec, t: &Real, grid: &[Real], tolerance: &Real) -> Result<EquivalenceReport> {
    if grid.is_empty() {
        return Err(Error::Domain("equivalence check on an empty grid".into()));
    }
    let profile = build_limit_profile(spec, t)?;
    let state = peakon_state(spec, t)?;
    let peak = state.peak_amplitude();
    let mut worst = (Real::zero(), grid[0].clone());
    for x in grid {
        let diff = (profile.eval(x) - state.eval(x)).abs();
        if diff > worst.0 {
            worst = (diff, x.clone());
        }
    }
    Ok(EquivalenceReport {
        max_relative: worst.0 / &peak,
        worst_x: worst.1,
        peak_amplitude: peak,
        tolerance: tolerance.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Real, b: &Real) -> bool {
        a.approx_eq(b, 1e-70)
    }

    fn two_peakon() -> LimitProfile {
        let spec = PeakonSpec::from_f64(&[1.0, 2.0], &[0.0, 0.0]).unwrap();
        build_limit_profile(&spec, &Real::zero()).unwrap()
    }

    #[test]
    fn breakpoint_fixtures() {
        let spec = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let p = build_limit_profile(&spec, &Real::zero()).unwrap();
        assert!(close(&p.breakpoints()[0], &Real::ln2()));
        let p = two_peakon();
        assert!(close(&p.breakpoints()[0], &Real::ratio(2, 5).ln()));
        assert!(close(&p.breakpoints()[1], &Real::from_i64(4).ln()));
    }

    #[test]
    fn single_peakon_left_branch() {
        let spec = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let p = build_limit_profile(&spec, &Real::zero()).unwrap();
        for x in ["-3", "0", "0.5"] {
            let x = Real::parse(x).unwrap();
            assert_eq!(p.branch_of(&x), 1);
            assert!(close(&p.eval(&x), &x.exp()));
        }
    }

    #[test]
    fn right_tail_branch() {
        let p = two_peakon();
        let x = Real::from_i64(3);
        assert_eq!(p.branch_of(&x), 3);
        assert!(close(&p.eval(&x), &(Real::from_i64(6) * (-&x).exp())));
    }

    #[test]
    fn continuity_at_breakpoints() {
        let p = two_peakon();
        for (k, b) in p.breakpoints().iter().enumerate() {
            let left = p.branch_value(k + 1, b);
            let right = p.branch_value(k + 2, b);
            assert!(left.approx_eq(&right, 1e-40), "{left} vs {right}");
            // half-open rule: the breakpoint itself belongs to the left branch
            assert_eq!(p.branch_of(b), k + 1);
        }
    }

    #[test]
    fn h_coefficient_fixtures() {
        let spec = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let p = build_limit_profile(&spec, &Real::zero()).unwrap();
        let h = p.h_coefficients(&Real::ln2());
        assert_eq!(h.len(), 3);
        assert_eq!(h[0], Real::one());
        assert!(h[1].abs() < Real::parse("1e-70").unwrap());
        assert!(h[2].is_negative());

        let p = two_peakon();
        let h = p.h_coefficients(&Real::zero());
        assert!(h[1].is_positive());
        assert!(!h[2].is_positive());
    }

    #[test]
    fn equivalence_small_grid() {
        let spec = PeakonSpec::from_f64(&[1.0, 2.0], &[0.0, 0.0]).unwrap();
        let grid: Vec<Real> = (0..=100).map(|i| Real::from_i64(-5) + Real::ratio(11 * i, 100)).collect();
        let tol = Real::parse("1e-35").unwrap();
        let r = equivalence_check(&spec, &Real::zero(), &grid, &tol).unwrap();
        assert!(r.passed(), "{}", r.max_relative);
        assert!(equivalence_check(&spec, &Real::zero(), &[], &tol).is_err());
    }
}
