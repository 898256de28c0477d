use super::{eval_parametric, log_ratio, SolitonSpec};
use crate::error::{Error, Result};
use crate::numkit::Real;

/// Default inversion tolerance in `x`.
pub const DEFAULT_INVERSION_TOL: f64 = 1e-30;

#[derive(Clone, Debug)]
pub struct InversionConfig {
    pub tol: Real,
    /// Number of bracket doublings allowed before giving up.
    pub max_doublings: u32,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            tol: Real::from_f64(DEFAULT_INVERSION_TOL),
            max_doublings: 40,
        }
    }
}

impl InversionConfig {
    pub fn with_tol(tol: Real) -> Self {
        InversionConfig { tol, ..Self::default() }
    }
}

fn fail(x: &Real, t: &Real, reason: String) -> Error {
    Error::Inversion {
        x: x.to_sci(20),
        t: t.to_sci(20),
        reason,
    }
}

/// Parameter `y` with `|x(y, t) - x| <= tol`, by bracket doubling from the
/// half-width `W = 10 + 4 N ln(1 / kappa)` followed by bisection.
pub fn invert(spec: &SolitonSpec, x: &Real, t: &Real, cfg: &InversionConfig) -> Result<Real> {
    if !cfg.tol.is_positive() {
        return Err(Error::Domain(format!("inversion tolerance {} must be positive", cfg.tol)));
    }
    let kappa = spec.kappa();
    let target = x - spec.alpha();
    let f = |y: &Real| y / kappa + log_ratio(spec, y, t) - &target;

    let w0 = Real::from_i64(10) + Real::from_i64(4 * spec.len() as i64) * kappa.recip().ln().max(Real::zero());
    let mut w = w0.clone();
    let mut doublings = 0;
    let (mut lo, mut hi) = loop {
        let lo = kappa * (&target - &w);
        let hi = kappa * (&target + &w);
        if !f(&lo).is_positive() && !f(&hi).is_negative() {
            break (lo, hi);
        }
        doublings += 1;
        if doublings > cfg.max_doublings {
            return Err(fail(x, t, format!("no sign change within half-width {}", w.to_sci(6))));
        }
        w = w * 2;
    };

    loop {
        let mid = (&lo + &hi).mul_pow2(-1);
        let fm = f(&mid);
        if fm.abs() <= cfg.tol {
            return Ok(mid);
        }
        if mid == lo || mid == hi {
            return Err(fail(
                x,
                t,
                format!("bracket exhausted at {} bits with residual {}", mid.prec(), fm.to_sci(6)),
            ));
        }
        if fm.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// `u(x, t)` through the inverted parametric map.
pub fn eval_physical(spec: &SolitonSpec, x: &Real, t: &Real, cfg: &InversionConfig) -> Result<Real> {
    let y = invert(spec, x, t, cfg)?;
    Ok(eval_parametric(spec, &y, t).1)
}

/// Centered finite-difference residual of
/// `u_t + 2 kappa^2 u_x - u_xxt + 3 u u_x - 2 u_x u_xx - u u_xxx`.
pub fn pde_residual(spec: &SolitonSpec, x: &Real, t: &Real, h: &Real, cfg: &InversionConfig) -> Result<Real> {
    if !h.is_positive() {
        return Err(Error::Domain(format!("stencil step {h} must be positive")));
    }
    let u = |dx: i32, dt: i32| eval_physical(spec, &(x + h * dx), &(t + h * dt), cfg);
    let (u0, up, um, up2, um2) = (u(0, 0)?, u(1, 0)?, u(-1, 0)?, u(2, 0)?, u(-2, 0)?);
    let h2 = h.square();
    let ux = (&up - &um) / (h * 2);
    let uxx = (&up - &u0 * 2 + &um) / &h2;
    let uxxx = (&up2 - &up * 2 + &um * 2 - &um2) / (&h2 * h * 2);
    let uxx_at = |dt: i32| -> Result<Real> { Ok((u(1, dt)? - u(0, dt)? * 2 + u(-1, dt)?) / &h2) };
    let ut = (u(0, 1)? - u(0, -1)?) / (h * 2);
    let uxxt = (uxx_at(1)? - uxx_at(-1)?) / (h * 2);
    let omega = spec.kappa().square();
    Ok(ut + omega * 2 * &ux - uxxt + &u0 * &ux * 3 - &ux * &uxx * 2 - u0 * uxxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_round_trip() {
        let s = SolitonSpec::from_f64(0.4, &[0.9, 1.8], &[0.3, -0.2]).unwrap();
        let cfg = InversionConfig::default();
        for y in ["-0.7", "0.05", "0.9"] {
            let y = Real::parse(y).unwrap();
            let t = Real::parse("0.2").unwrap();
            let (x, u) = eval_parametric(&s, &y, &t);
            let back = eval_physical(&s, &x, &t, &cfg).unwrap();
            assert!((back - u).abs() < Real::parse("1e-28").unwrap());
        }
    }

    #[test]
    fn vacuum_left() {
        let s = SolitonSpec::from_f64(0.5, &[1.2], &[0.0]).unwrap();
        let u = eval_physical(&s, &Real::from_i64(-200), &Real::zero(), &InversionConfig::default()).unwrap();
        assert!(u.abs() < Real::parse("1e-50").unwrap());
    }

    #[test]
    fn bad_tolerance() {
        let s = SolitonSpec::from_f64(0.5, &[1.2], &[0.0]).unwrap();
        let cfg = InversionConfig::with_tol(Real::zero());
        assert!(matches!(invert(&s, &Real::zero(), &Real::zero(), &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn bracket_limit_reports_inversion_failure() {
        // phi ~ 14.5 exceeds the initial half-width ~ 10.04, so one doubling is needed
        let kappa = Real::parse("0.99").unwrap();
        let k = (Real::one() - Real::parse("1e-6").unwrap()) / &kappa;
        let s = SolitonSpec::new(kappa, vec![k], vec![Real::zero()], Real::zero()).unwrap();
        let x = Real::from_i64(100);
        let strict = InversionConfig { max_doublings: 0, ..InversionConfig::default() };
        let r = invert(&s, &x, &Real::zero(), &strict);
        assert!(matches!(r, Err(Error::Inversion { .. })), "{r:?}");
        assert!(invert(&s, &x, &Real::zero(), &InversionConfig::default()).is_ok());
    }
}
