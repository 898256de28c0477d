use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::Real;
use crate::peakon::PeakonSpec;
use crate::soliton::SolitonSpec;

/// Direction in which the phase correction `ln C_i` enters the soliton
/// phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn as_i32(self) -> i32 {
        match self {
            PhaseSign::Plus => 1,
            PhaseSign::Minus => -1,
        }
    }
}

/// Fixed by `examples/calibrate_phase_sign.rs`: the other sign leaves an
/// O(1) translation error that does not shrink with `kappa`.
pub const CALIBRATED_PHASE_SIGN: PhaseSign = PhaseSign::Minus;

pub fn build_soliton_for_peakon(target: &PeakonSpec, kappa: &Real) -> Result<SolitonSpec> {
    build_soliton_with_sign(target, kappa, CALIBRATED_PHASE_SIGN)
}

/// Soliton with speeds exactly `c_i`: `k_i = sqrt(1 - 2 kappa^2 / c_i) / kappa`,
/// `y0_i = kappa (p_i + sign ln C_i) + phi_i / k_i`, where
/// `C_i = prod_j lambda_j^2 / (2 lambda_i^2 prod_{j != i} (lambda_i - lambda_j)^2)`,
/// `lambda_i = 2 / c_i`. Components are ordered by increasing speed.
pub fn build_soliton_with_sign(target: &PeakonSpec, kappa: &Real, sign: PhaseSign) -> Result<SolitonSpec> {
    if !kappa.is_positive() {
        return Err(Error::InvalidSpec(format!("kappa = {kappa} must be positive")));
    }
    let mut order: Vec<usize> = (0..target.len()).collect();
    order.sort_by(|&a, &b| target.speeds()[a].total_cmp(&target.speeds()[b]));
    let c: Vec<&Real> = order.iter().map(|&i| &target.speeds()[i]).collect();
    let p: Vec<&Real> = order.iter().map(|&i| &target.phases()[i]).collect();

    let two_k2 = kappa.square() * 2;
    if let Some(bad) = c.iter().find(|ci| **ci <= &two_k2) {
        return Err(Error::Constraint {
            speed: bad.to_sci(20),
            kappa: kappa.to_sci(20),
        });
    }
    let one = Real::one();
    let k: Vec<Real> = c.iter().map(|ci| (&one - &two_k2 / *ci).sqrt() / kappa).collect();
    let ln_lambda: Vec<Real> = c.iter().map(|ci| (Real::from_i64(2) / *ci).ln()).collect();
    let sum_ln_lambda2: Real = ln_lambda.iter().sum::<Real>() * 2;
    let s = sign.as_i32();
    let y0 = (0..c.len())
        .map(|i| {
            let lam_i = Real::from_i64(2) / c[i];
            let mut ln_c = &sum_ln_lambda2 - Real::ln2() - &ln_lambda[i] * 2;
            for j in (0..c.len()).filter(|&j| j != i) {
                ln_c -= (&lam_i - Real::from_i64(2) / c[j]).square().ln();
            }
            let q = kappa * &k[i];
            let phi = ((&one + &q) / (&one - &q)).ln();
            kappa * (p[i] + ln_c * s) + phi / &k[i]
        })
        .collect();
    SolitonSpec::new(kappa.clone(), k, y0, Real::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_number_fixture() {
        let target = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let s = build_soliton_for_peakon(&target, &Real::parse("0.1").unwrap()).unwrap();
        let expect = Real::parse("0.99").unwrap().sqrt() * 10;
        assert!(s.k()[0].approx_eq(&expect, 1e-70));
        assert!(s.speeds()[0].approx_eq(&Real::from_i64(2), 1e-70));
    }

    #[test]
    fn constraint_names_speed() {
        let target = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let err = build_soliton_for_peakon(&target, &Real::parse("1.2").unwrap()).unwrap_err();
        assert!(matches!(err, Error::Constraint { ref speed, .. } if speed.starts_with("2.0")));
    }

    #[test]
    fn single_phase_correction() {
        // C_1 = 1/2, so the two signs differ by 2 kappa ln 2
        let target = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let kappa = Real::parse("0.25").unwrap();
        let minus = build_soliton_with_sign(&target, &kappa, PhaseSign::Minus).unwrap();
        let plus = build_soliton_with_sign(&target, &kappa, PhaseSign::Plus).unwrap();
        let gap = &minus.y0()[0] - &plus.y0()[0];
        assert!(gap.approx_eq(&(&kappa * Real::ln2() * 2), 1e-70));
    }

    #[test]
    fn speeds_sorted() {
        let target = PeakonSpec::from_f64(&[3.0, 1.0, 2.0], &[0.1, 0.2, 0.3]).unwrap();
        let s = build_soliton_for_peakon(&target, &Real::parse("0.2").unwrap()).unwrap();
        for (got, want) in s.speeds().iter().zip([1, 2, 3]) {
            assert!(got.approx_eq(&Real::from_i64(want), 1e-60));
        }
    }
}
