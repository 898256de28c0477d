use serde::Serialize;

use super::{build_soliton_for_peakon, PrecisionPolicy};
use crate::error::Result;
use crate::limitprofile::build_limit_profile;
use crate::numkit::{with_bits, Real};
use crate::peakon::PeakonSpec;
use crate::soliton::{hirota_g, invert, InversionConfig};

/// Outcome of comparing `g1 / g2` at `(y(x), t)` with its predicted leading
/// term `-(h_n / h_{n-1}) eps^{2n-2}`, `eps = kappa^2 / 4`, on branch `n`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum LeadingOrder {
    Compared {
        branch: usize,
        observed: Real,
        predicted: Real,
        ratio: Real,
    },
    /// `x` lies beyond the last breakpoint.
    NotApplicable { branch: usize },
    /// The prediction degenerates at `x` (a vanishing `h_{n-1}` or `h_n`).
    Skipped { branch: usize, reason: String },
}

impl LeadingOrder {
    pub fn ratio(&self) -> Option<&Real> {
        match self {
            LeadingOrder::Compared { ratio, .. } => Some(ratio),
            _ => None,
        }
    }
}

pub fn leading_order_diagnostic(target: &PeakonSpec, kappa: &Real, t: &Real, x: &Real) -> Result<LeadingOrder> {
    let n_peakons = target.len();
    let bits = PrecisionPolicy::Scaling.bits(n_peakons, kappa);
    with_bits(bits, || {
        let profile = build_limit_profile(target, t)?;
        // h_{n-1} and h_n vanish exactly at the branch ends; a point on a
        // breakpoint belongs to the branch on its left
        let slack = Real::one().mul_pow2(16 - x.prec().min(bits) as i32);
        if let Some(b) = profile
            .breakpoints()
            .iter()
            .position(|b| (x - b).abs() <= &slack * b.abs().max(Real::one()))
        {
            return Ok(LeadingOrder::Skipped {
                branch: b + 1,
                reason: format!("x coincides with breakpoint {}, where h_{} vanishes", b + 1, b + 1),
            });
        }
        let n = profile.branch_of(x);
        if n > n_peakons {
            return Ok(LeadingOrder::NotApplicable { branch: n });
        }
        let h = profile.h_coefficients(x);
        let eps = kappa.square().mul_pow2(-2);
        let predicted = -(&h[n] / &h[n - 1]) * eps.powi(2 * n as i32 - 2);
        let spec = build_soliton_for_peakon(target, kappa)?;
        let y = invert(&spec, x, t, &InversionConfig::default())?;
        let observed = hirota_g(&spec, &y, t).log_ratio().exp();
        Ok(LeadingOrder::Compared {
            branch: n,
            ratio: &observed / &predicted,
            observed,
            predicted,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_peakon_left_branch() {
        let target = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let x = Real::parse("-0.5").unwrap();
        let far = leading_order_diagnostic(&target, &Real::one().mul_pow2(-4), &Real::zero(), &x).unwrap();
        let near = leading_order_diagnostic(&target, &Real::one().mul_pow2(-6), &Real::zero(), &x).unwrap();
        let err = |r: &LeadingOrder| (r.ratio().unwrap() - Real::one()).abs();
        assert!(err(&near) < err(&far).mul_pow2(-1));
        assert!(err(&near) < Real::parse("1e-3").unwrap());
    }

    #[test]
    fn markers() {
        let target = PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap();
        let k = Real::one().mul_pow2(-4);
        let r = leading_order_diagnostic(&target, &k, &Real::zero(), &Real::from_i64(3)).unwrap();
        assert!(matches!(r, LeadingOrder::NotApplicable { branch: 2 }));
        let r = leading_order_diagnostic(&target, &k, &Real::zero(), &Real::ln2()).unwrap();
        assert!(matches!(r, LeadingOrder::Skipped { branch: 1, .. }), "{r:?}");
    }
}
