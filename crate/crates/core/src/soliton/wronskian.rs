use serde::Serialize;

use super::{subset_g, SubsetFormSpec};
use crate::error::{Error, Result};
use crate::numkit::{det_dense, Matrix, Real};

#[derive(Clone, Debug, Serialize)]
pub struct WronskianForms {
    pub f1: Real,
    pub f2: Real,
    /// `kappa f1 f2 / prod (k_i^2 - 1 / (4 kappa^2))`, the Jacobian `dy/dx`.
    pub r: Real,
}

/// Wronskian of `Phi_1..Phi_N` (cosh for odd `i`, sinh for even `i`),
/// optionally bordered by `exp(sign y / (2 kappa))`; `y`-derivatives are
/// analytic.
fn wronskian_matrix(spec: &SubsetFormSpec, y: &Real, t: &Real, border: Option<i32>) -> Matrix {
    let n = spec.len();
    let xi = spec.xi(y, t);
    let ch: Vec<Real> = xi.iter().map(Real::cosh).collect();
    let sh: Vec<Real> = xi.iter().map(Real::sinh).collect();
    let size = n + usize::from(border.is_some());
    Matrix::from_fn(size, size, |r, c| {
        if c < n {
            // index c is 0-based, so even c means an odd (cosh) function
            let base_is_cosh = c % 2 == 0;
            let f = if base_is_cosh == (r % 2 == 0) { &ch[c] } else { &sh[c] };
            spec.k()[c].powi(r as i32) * f
        } else {
            let s = border.expect("border column");
            let rate = (spec.kappa() * 2 * s).recip();
            rate.powi(r as i32) * (&rate * y).exp()
        }
    })
}

pub fn wronskian_forms(spec: &SubsetFormSpec, y: &Real, t: &Real) -> Result<WronskianForms> {
    let w0 = det_dense(&wronskian_matrix(spec, y, t, None))?;
    if w0.is_zero() {
        return Err(Error::Degenerate(format!("Wronskian of the soliton basis vanishes at y = {y}, t = {t}")));
    }
    let f1 = det_dense(&wronskian_matrix(spec, y, t, Some(1)))? / &w0;
    let f2 = det_dense(&wronskian_matrix(spec, y, t, Some(-1)))? / &w0;
    let q = (spec.kappa().square() * 4).recip();
    let denom: Real = spec.k().iter().map(|k| k.square() - &q).product();
    let r = spec.kappa() * &f1 * &f2 / denom;
    Ok(WronskianForms { f1, f2, r })
}

/// Relative residual of `(-1)^N f1 / f2 = e^{y / kappa} (g1 / g2) prod a_i`,
/// with the left side from Wronskians and the right from subset sums.
pub fn relationship_residual(spec: &SubsetFormSpec, y: &Real, t: &Real) -> Result<Real> {
    let w = wronskian_forms(spec, y, t)?;
    let mut lhs = w.f1 / w.f2;
    if spec.len() % 2 == 1 {
        lhs = -lhs;
    }
    let g = subset_g(spec, y, t);
    let ln_a: Real = spec.a().iter().map(Real::ln).sum();
    let rhs = (y / spec.kappa() + g.log_g1 - g.log_g2 + ln_a).exp();
    Ok((lhs - &rhs).abs() / rhs)
}

fn a_matrix(spec: &SubsetFormSpec, y: &Real, t: &Real, last: impl Fn(usize) -> Real) -> Matrix {
    let n = spec.len();
    let e2: Vec<Real> = spec.xi(y, t).iter().map(|x| (x * 2).exp()).collect();
    Matrix::from_fn(n + 1, n + 1, |r, c| {
        if c == n {
            return last(r);
        }
        let k = &spec.k()[c];
        let kr = k.powi(r as i32);
        // (-1)^{j-1} (-k_j)^r with j = c + 1
        let odd = (c + r) % 2 == 1;
        if odd {
            &kr * &e2[c] - &kr
        } else {
            &kr * &e2[c] + &kr
        }
    })
}

/// Columns `k_j^r e^{2 xi_j} + (-1)^{j-1} (-k_j)^r`, last column `(2 kappa)^{N-r}`.
pub fn determinant_a_direct(spec: &SubsetFormSpec, y: &Real, t: &Real) -> Result<Real> {
    let n = spec.len() as i32;
    let tk = spec.kappa() * 2;
    det_dense(&a_matrix(spec, y, t, |r| tk.powi(n - r as i32)))
}

/// As [`determinant_a_direct`] with last column `(-1 / (2 kappa))^r`.
pub fn determinant_a_prime_direct(spec: &SubsetFormSpec, y: &Real, t: &Real) -> Result<Real> {
    let d = -(spec.kappa() * 2).recip();
    det_dense(&a_matrix(spec, y, t, |r| d.powi(r as i32)))
}

/// `sum_I e^{2 xi_I} Gamma_I Gamma_J prod_{i in I} (1 - s 2 kappa k_i)
/// prod_{j in J} (1 + s 2 kappa k_j) prod_{i in I, j in J} (k_i + k_j)`,
/// `s = 1` for `A` and `s = -1` for `A'`.
fn a_expansion(spec: &SubsetFormSpec, y: &Real, t: &Real, s: i32) -> Real {
    let n = spec.len();
    let k = spec.k();
    let e2: Vec<Real> = spec.xi(y, t).iter().map(|x| (x * 2).exp()).collect();
    let q: Vec<Real> = k.iter().map(|ki| spec.kappa() * ki * 2 * s).collect();
    let mut total = Real::zero();
    for mask in 0u32..1 << n {
        let inside = |i: usize| mask >> i & 1 == 1;
        let mut term = Real::one();
        for i in 0..n {
            if inside(i) {
                term *= &e2[i] * (Real::one() - &q[i]);
            } else {
                term *= Real::one() + &q[i];
            }
            for j in i + 1..n {
                term *= if inside(i) == inside(j) {
                    &k[j] - &k[i]
                } else {
                    &k[i] + &k[j]
                };
            }
        }
        total += term;
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct DeterminantAReport {
    pub a_direct: Real,
    pub a_expansion: Real,
    pub a_residual: Real,
    /// `(-2 kappa)^N` times the literal `A'` determinant.
    pub a_prime_direct: Real,
    pub a_prime_expansion: Real,
    pub a_prime_residual: Real,
    /// `A` against `prod_{i<j} (k_j - k_i) prod (1 + 2 kappa k_i) g1`.
    pub g1_residual: Real,
    pub g2_residual: Real,
    pub tolerance: Real,
}

impl DeterminantAReport {
    pub fn max_residual(&self) -> Real {
        [&self.a_residual, &self.a_prime_residual, &self.g1_residual, &self.g2_residual]
            .into_iter()
            .fold(Real::zero(), |m, r| m.max(r.clone()))
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance
    }
}

pub fn determinant_a_checks(spec: &SubsetFormSpec, y: &Real, t: &Real, tolerance: &Real) -> Result<DeterminantAReport> {
    let n = spec.len();
    if n > 6 {
        return Err(Error::Domain(format!("direct determinant checks support N <= 6, got {n}")));
    }
    let rel = |a: &Real, b: &Real| (a - b).abs() / b.abs();
    let a_direct = determinant_a_direct(spec, y, t)?;
    let a_expansion = a_expansion(spec, y, t, 1);
    let a_prime_direct = determinant_a_prime_direct(spec, y, t)? * (-(spec.kappa() * 2)).powi(n as i32);
    let a_prime_expansion = a_expansion_prime(spec, y, t);
    let k = spec.k();
    let mut vander = Real::one();
    for i in 0..n {
        for j in i + 1..n {
            vander *= &k[j] - &k[i];
        }
    }
    let g = subset_g(spec, y, t);
    let plus: Real = k.iter().map(|ki| Real::one() + spec.kappa() * ki * 2).product();
    let minus: Real = k.iter().map(|ki| Real::one() - spec.kappa() * ki * 2).product();
    Ok(DeterminantAReport {
        a_residual: rel(&a_direct, &a_expansion),
        a_prime_residual: rel(&a_prime_direct, &a_prime_expansion),
        g1_residual: rel(&(&vander * plus * g.log_g1.exp()), &a_direct),
        g2_residual: rel(&(vander * minus * g.log_g2.exp()), &a_prime_direct),
        a_direct,
        a_expansion,
        a_prime_direct,
        a_prime_expansion,
        tolerance: tolerance.clone(),
    })
}

fn a_expansion_prime(spec: &SubsetFormSpec, y: &Real, t: &Real) -> Real {
    a_expansion(spec, y, t, -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_function_wronskian() {
        let s = SubsetFormSpec::from_f64(0.5, &[0.6], &[0.0]).unwrap();
        let m = wronskian_matrix(&s, &Real::zero(), &Real::zero(), None);
        assert_eq!(det_dense(&m).unwrap(), Real::one());
    }

    #[test]
    fn two_by_two_expansion() {
        let s = SubsetFormSpec::from_f64(0.5, &[0.6], &[0.1]).unwrap();
        let (y, t) = (Real::parse("0.3").unwrap(), Real::zero());
        let e = (&s.xi(&y, &t)[0] * 2).exp();
        let q = s.kappa() * &s.k()[0] * 2;
        let hand = Real::one() + &q + e * (Real::one() - q);
        assert!(determinant_a_direct(&s, &y, &t).unwrap().approx_eq(&hand, 1e-70));
    }

    #[test]
    fn vacuum_limit_of_a() {
        let s = SubsetFormSpec::from_f64(0.4, &[0.3, 0.7, 1.1], &[0.0; 3]).unwrap();
        let a = determinant_a_direct(&s, &Real::from_i64(-2000), &Real::zero()).unwrap();
        let k = s.k();
        let expect: Real = (&k[1] - &k[0]) * (&k[2] - &k[0]) * (&k[2] - &k[1])
            * k.iter().map(|ki| Real::one() + s.kappa() * ki * 2).product::<Real>();
        assert!(a.approx_eq(&expect, 1e-60));
    }

    #[test]
    fn checks_pass_for_three() {
        let s = SubsetFormSpec::from_f64(0.4, &[0.3, 0.7, 1.1], &[0.2, -0.1, 0.5]).unwrap();
        let tol = Real::parse("1e-35").unwrap();
        for y in ["-1", "0.25", "1.5"] {
            let r = determinant_a_checks(&s, &Real::parse(y).unwrap(), &Real::parse("0.3").unwrap(), &tol).unwrap();
            assert!(r.passed(), "{}", r.max_residual());
            let res = relationship_residual(&s, &Real::parse(y).unwrap(), &Real::zero()).unwrap();
            assert!(res < tol, "{res}");
        }
    }

    #[test]
    fn jacobian_positive() {
        let s = SubsetFormSpec::from_f64(0.5, &[0.4, 0.9], &[0.1, -0.2]).unwrap();
        for y in ["-2", "-0.5", "0", "0.7", "2"] {
            let w = wronskian_forms(&s, &Real::parse(y).unwrap(), &Real::zero()).unwrap();
            assert!(w.r.is_positive());
        }
    }
}
