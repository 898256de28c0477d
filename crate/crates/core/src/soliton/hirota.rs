use serde::Serialize;

use super::SolitonSpec;
use crate::numkit::Real;

/// `ln g1`, `ln g2` and their first derivatives in `t` and `y`.
#[derive(Clone, Debug, Serialize)]
pub struct HirotaG {
    pub log_g1: Real,
    pub log_g2: Real,
    pub dt_log_g1: Real,
    pub dt_log_g2: Real,
    pub dy_log_g1: Real,
    pub dy_log_g2: Real,
}

impl HirotaG {
    pub fn log_ratio(&self) -> Real {
        &self.log_g1 - &self.log_g2
    }

    /// `u = d/dt ln(g1 / g2)`.
    pub fn u(&self) -> Real {
        &self.dt_log_g1 - &self.dt_log_g2
    }
}

/// Shared exponents `K y - R t + C` and the shift `max` over them.
fn exponents(spec: &SolitonSpec, y: &Real, t: &Real) -> (Vec<Real>, Real) {
    let e: Vec<Real> = spec
        .terms()
        .iter()
        .map(|term| &term.k_sum * y - &term.rate * t + &term.offset)
        .collect();
    let shift = e.iter().skip(1).fold(e[0].clone(), |m, v| if *v > m { v.clone() } else { m });
    (e, shift)
}

/// Both sums over `mu in {0,1}^N` of
/// `exp(sum mu_i (xi_i -+ phi_i) + sum_{i<j} mu_i mu_j gamma_ij)`,
/// evaluated with a max shift; derivatives are softmax-weighted means of the
/// exponent derivatives.
pub fn hirota_g(spec: &SolitonSpec, y: &Real, t: &Real) -> HirotaG {
    let (e, shift) = exponents(spec, y, t);
    let zero = Real::zero;
    let (mut s1, mut s2, mut t1, mut t2, mut y1, mut y2) = (zero(), zero(), zero(), zero(), zero(), zero());
    for (term, ei) in spec.terms().iter().zip(&e) {
        let w = (ei - &shift).exp();
        let a = &w * &term.w1;
        let b = w * &term.w2;
        t1 -= &a * &term.rate;
        t2 -= &b * &term.rate;
        y1 += &a * &term.k_sum;
        y2 += &b * &term.k_sum;
        s1 += a;
        s2 += b;
    }
    HirotaG {
        log_g1: &shift + s1.ln(),
        log_g2: &shift + s2.ln(),
        dt_log_g1: t1 / &s1,
        dt_log_g2: t2 / &s2,
        dy_log_g1: y1 / &s1,
        dy_log_g2: y2 / &s2,
    }
}

/// `ln(g1 / g2)` alone, the quantity the inversion needs.
pub fn log_ratio(spec: &SolitonSpec, y: &Real, t: &Real) -> Real {
    let (e, shift) = exponents(spec, y, t);
    let (mut s1, mut s2) = (Real::zero(), Real::zero());
    for (term, ei) in spec.terms().iter().zip(&e) {
        let w = (ei - &shift).exp();
        s1 += &w * &term.w1;
        s2 += w * &term.w2;
    }
    (s1 / s2).ln()
}

/// `(x, u)` at parameter `y`: `x = y / kappa + ln(g1 / g2) + alpha`.
pub fn eval_parametric(spec: &SolitonSpec, y: &Real, t: &Real) -> (Real, Real) {
    let g = hirota_g(spec, y, t);
    (y / spec.kappa() + g.log_ratio() + spec.alpha(), g.u())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::needless_range_loop)]
    fn brute_g1(spec: &SolitonSpec, y: &Real, t: &Real) -> Real {
        let n = spec.len();
        let xi: Vec<Real> = (0..n)
            .map(|i| &spec.k()[i] * (y - spec.kappa() * &spec.speeds()[i] * t - &spec.y0()[i]))
            .collect();
        (0u32..1 << n)
            .map(|mask| {
                let mut e = Real::zero();
                for i in 0..n {
                    if mask >> i & 1 == 1 {
                        e += &xi[i] - &spec.phi()[i];
                        for j in i + 1..n {
                            if mask >> j & 1 == 1 {
                                e += spec.gamma(i, j);
                            }
                        }
                    }
                }
                e.exp()
            })
            .sum()
    }

    #[test]
    fn single_soliton_balance() {
        let s = SolitonSpec::from_f64(0.5, &[1.2], &[0.0]).unwrap();
        // xi = phi at t = 0 means y = phi / k
        let y = &s.phi()[0] / &s.k()[0];
        let g = hirota_g(&s, &y, &Real::zero());
        assert!(g.log_g1.approx_eq(&Real::ln2(), 1e-70));
    }

    #[test]
    fn vacuum_far_left() {
        let s = SolitonSpec::from_f64(0.5, &[0.8, 1.4], &[0.0, 0.3]).unwrap();
        let g = hirota_g(&s, &Real::from_i64(-400), &Real::zero());
        assert!(g.u().abs() < Real::parse("1e-100").unwrap());
    }

    #[test]
    fn matches_direct_sum() {
        let s = SolitonSpec::from_f64(0.45, &[0.7, 1.9], &[0.25, -0.4]).unwrap();
        for (y, t) in [("0.3", "0"), ("-1.1", "0.7"), ("2.5", "-0.4")] {
            let (y, t) = (Real::parse(y).unwrap(), Real::parse(t).unwrap());
            let g = hirota_g(&s, &y, &t);
            assert!(g.log_g1.exp().approx_eq(&brute_g1(&s, &y, &t), 1e-40));
            assert!(g.log_g1 < g.log_g2);
        }
    }

    #[test]
    fn analytic_time_derivative() {
        let s = SolitonSpec::from_f64(0.45, &[0.7, 1.9], &[0.25, -0.4]).unwrap();
        let y = Real::parse("0.2").unwrap();
        let h = Real::parse("1e-20").unwrap();
        let g = hirota_g(&s, &y, &Real::zero());
        let fd = (hirota_g(&s, &y, &h).log_g1 - hirota_g(&s, &y, &-&h).log_g1) / (&h * 2);
        assert!(fd.approx_eq(&g.dt_log_g1, 1e-30));
        let fd = (hirota_g(&s, &(&y + &h), &Real::zero()).log_g2 - hirota_g(&s, &(&y - &h), &Real::zero()).log_g2)
            / (&h * 2);
        assert!(fd.approx_eq(&g.dy_log_g2, 1e-30));
    }
}
