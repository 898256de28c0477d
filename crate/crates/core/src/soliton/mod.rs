//! Smooth N-solitons of the dispersive equation
//! `u_t + 2 kappa^2 u_x - u_xxt + 3 u u_x = 2 u_x u_xx + u u_xxx`
//! in parametric form `x = y / kappa + ln(g1 / g2) + alpha`,
//! `u = d/dt ln(g1 / g2)`.
//!
//! Two wave-number conventions appear in the literature and are kept apart
//! here: [`SolitonSpec`] uses `0 < kappa k_i < 1` (bilinear form) and
//! [`SubsetFormSpec`] uses `0 < 2 kappa k_i < 1` (subset and Wronskian forms).
//! [`SubsetFormSpec::to_hirota`] and [`SolitonSpec::to_subset_form`] convert.

mod hirota;
mod physical;
mod subset;
mod wronskian;

pub use hirota::{eval_parametric, hirota_g, log_ratio, HirotaG};
pub use physical::{eval_physical, invert, pde_residual, InversionConfig, DEFAULT_INVERSION_TOL};
pub use subset::{form_equivalence, subset_g, subset_g_direct, FormEquivalenceReport, SubsetG};
pub use wronskian::{
    determinant_a_checks, determinant_a_direct, determinant_a_prime_direct, relationship_residual,
    wronskian_forms, DeterminantAReport, WronskianForms,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::Real;

fn check_wave_numbers(kappa: &Real, k: &[Real], scale: i32, y0: &[Real]) -> Result<()> {
    if !kappa.is_positive() {
        return Err(Error::InvalidSpec(format!("kappa = {kappa} must be positive")));
    }
    if k.is_empty() {
        return Err(Error::InvalidSpec("a soliton spec needs at least one wave number".into()));
    }
    if k.len() != y0.len() {
        return Err(Error::InvalidSpec(format!("{} wave numbers but {} phases", k.len(), y0.len())));
    }
    for (i, ki) in k.iter().enumerate() {
        let q = kappa * ki * scale;
        if !ki.is_positive() || q >= Real::one() {
            return Err(Error::InvalidSpec(format!(
                "wave number k_{} = {ki} violates 0 < {}kappa k < 1",
                i + 1,
                if scale == 1 { "" } else { "2 " }
            )));
        }
    }
    for (i, w) in k.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(Error::Degenerate(format!("wave numbers k_{} and k_{} coincide", i + 1, i + 2)));
        }
        if w[0] > w[1] {
            return Err(Error::InvalidSpec(format!("wave numbers must increase (k_{} > k_{})", i + 1, i + 2)));
        }
    }
    Ok(())
}

/// One summand of the bilinear sums: exponent `K y - R t + C` shared by
/// both sums, weighted by `exp(-Phi)` in `g1` and `exp(+Phi)` in `g2`.
#[derive(Clone, Debug)]
pub(crate) struct BilinearTerm {
    pub(crate) k_sum: Real,
    pub(crate) rate: Real,
    pub(crate) offset: Real,
    pub(crate) w1: Real,
    pub(crate) w2: Real,
}

/// Bilinear-form soliton: `xi_i = k_i (y - kappa c_i t - y0_i)` with
/// `c_i = 2 kappa^2 / (1 - kappa^2 k_i^2)`.
#[derive(Clone, Debug, Serialize)]
pub struct SolitonSpec {
    kappa: Real,
    k: Vec<Real>,
    y0: Vec<Real>,
    alpha: Real,
    #[serde(skip)]
    phi: Vec<Real>,
    #[serde(skip)]
    speeds: Vec<Real>,
    #[serde(skip)]
    terms: Vec<BilinearTerm>,
}

impl SolitonSpec {
    pub fn new(kappa: Real, k: Vec<Real>, y0: Vec<Real>, alpha: Real) -> Result<Self> {
        check_wave_numbers(&kappa, &k, 1, &y0)?;
        if k.len() > 20 {
            return Err(Error::InvalidSpec(format!("{} solitons exceed the supported 20", k.len())));
        }
        let one = Real::one();
        let phi: Vec<Real> = k
            .iter()
            .map(|ki| ((&one + &kappa * ki) / (&one - &kappa * ki)).ln())
            .collect();
        let k2 = kappa.square();
        let speeds: Vec<Real> = k.iter().map(|ki| &k2 * 2 / (&one - &k2 * ki.square())).collect();
        let n = k.len();
        let mut gamma = vec![vec![Real::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                gamma[i][j] = ((&k[i] - &k[j]) / (&k[i] + &k[j])).abs().ln() * 2;
            }
        }
        let terms = (0u32..1 << n)
            .map(|mask| {
                let on: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let mut t = BilinearTerm {
                    k_sum: Real::zero(),
                    rate: Real::zero(),
                    offset: Real::zero(),
                    w1: Real::zero(),
                    w2: Real::zero(),
                };
                let mut phi_sum = Real::zero();
                for (a, &i) in on.iter().enumerate() {
                    t.k_sum += &k[i];
                    t.rate += &k[i] * &kappa * &speeds[i];
                    t.offset -= &k[i] * &y0[i];
                    phi_sum += &phi[i];
                    for &j in &on[a + 1..] {
                        t.offset += &gamma[i][j];
                    }
                }
                t.w1 = (-&phi_sum).exp();
                t.w2 = phi_sum.exp();
                t
            })
            .collect();
        Ok(SolitonSpec { kappa, k, y0, alpha, phi, speeds, terms })
    }

    pub fn from_f64(kappa: f64, k: &[f64], y0: &[f64]) -> Result<Self> {
        Self::new(
            Real::from_f64(kappa),
            k.iter().map(|&v| Real::from_f64(v)).collect(),
            y0.iter().map(|&v| Real::from_f64(v)).collect(),
            Real::zero(),
        )
    }

    pub fn with_alpha(&self, alpha: Real) -> Self {
        SolitonSpec { alpha, ..self.clone() }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn kappa(&self) -> &Real {
        &self.kappa
    }

    pub fn k(&self) -> &[Real] {
        &self.k
    }

    pub fn y0(&self) -> &[Real] {
        &self.y0
    }

    pub fn alpha(&self) -> &Real {
        &self.alpha
    }

    /// `c_i = 2 kappa^2 / (1 - kappa^2 k_i^2)`.
    pub fn speeds(&self) -> &[Real] {
        &self.speeds
    }

    /// `phi_i = ln((1 + kappa k_i) / (1 - kappa k_i))`.
    pub fn phi(&self) -> &[Real] {
        &self.phi
    }

    /// `gamma_ij = ln(((k_i - k_j) / (k_i + k_j))^2)`.
    pub fn gamma(&self, i: usize, j: usize) -> Real {
        ((&self.k[i] - &self.k[j]) / (&self.k[i] + &self.k[j])).square().ln()
    }

    pub(crate) fn terms(&self) -> &[BilinearTerm] {
        &self.terms
    }

    /// Inverse of [`SubsetFormSpec::to_hirota`]; `alpha` is dropped.
    pub fn to_subset_form(&self) -> Result<SubsetFormSpec> {
        let k: Vec<Real> = self.k.iter().map(|ki| ki.mul_pow2(-1)).collect();
        let shifts = subset::interaction_logs(&k);
        let y0 = self
            .y0
            .iter()
            .zip(&k)
            .zip(&shifts)
            .map(|((y, ki), s)| y + s / (ki * 2))
            .collect();
        SubsetFormSpec::new(self.kappa.clone(), k, y0)
    }
}

/// Subset/Wronskian-form soliton: `xi_i = k_i (y - kappa c_i t - y0_i)` with
/// `c_i = 2 kappa^2 / (1 - 4 kappa^2 k_i^2)`.
#[derive(Clone, Debug, Serialize)]
pub struct SubsetFormSpec {
    kappa: Real,
    k: Vec<Real>,
    y0: Vec<Real>,
}

impl SubsetFormSpec {
    pub fn new(kappa: Real, k: Vec<Real>, y0: Vec<Real>) -> Result<Self> {
        check_wave_numbers(&kappa, &k, 2, &y0)?;
        if k.len() > 20 {
            return Err(Error::InvalidSpec(format!("{} solitons exceed the supported 20", k.len())));
        }
        Ok(SubsetFormSpec { kappa, k, y0 })
    }

    pub fn from_f64(kappa: f64, k: &[f64], y0: &[f64]) -> Result<Self> {
        Self::new(
            Real::from_f64(kappa),
            k.iter().map(|&v| Real::from_f64(v)).collect(),
            y0.iter().map(|&v| Real::from_f64(v)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn kappa(&self) -> &Real {
        &self.kappa
    }

    pub fn k(&self) -> &[Real] {
        &self.k
    }

    pub fn y0(&self) -> &[Real] {
        &self.y0
    }

    /// `c_i = 2 kappa^2 / (1 - 4 kappa^2 k_i^2)`.
    pub fn speeds(&self) -> Vec<Real> {
        let k2 = self.kappa.square();
        self.k
            .iter()
            .map(|ki| &k2 * 2 / (Real::one() - &k2 * ki.square() * 4))
            .collect()
    }

    /// `a_i = (1 + 2 kappa k_i) / (1 - 2 kappa k_i)`.
    pub fn a(&self) -> Vec<Real> {
        self.k
            .iter()
            .map(|ki| {
                let q = &self.kappa * ki * 2;
                (Real::one() + &q) / (Real::one() - q)
            })
            .collect()
    }

    pub fn b(&self) -> Vec<Real> {
        self.a().into_iter().map(|a| a.recip()).collect()
    }

    pub fn xi(&self, y: &Real, t: &Real) -> Vec<Real> {
        self.k
            .iter()
            .zip(self.speeds())
            .zip(&self.y0)
            .map(|((ki, c), y0)| ki * (y - &self.kappa * c * t - y0))
            .collect()
    }

    /// `d xi_i / dt = -kappa k_i c_i`.
    pub fn xi_rates(&self) -> Vec<Real> {
        self.k
            .iter()
            .zip(self.speeds())
            .map(|(ki, c)| -(&self.kappa * ki * c))
            .collect()
    }

    /// Bilinear-form spec with the same `g1`, `g2`: wave numbers double and
    /// each phase absorbs `ln prod_{j != i} sgn(j - i) (k_j + k_i) / (k_j - k_i)`.
    pub fn to_hirota(&self, alpha: Real) -> Result<SolitonSpec> {
        let shifts = subset::interaction_logs(&self.k);
        let y0 = self
            .y0
            .iter()
            .zip(&self.k)
            .zip(&shifts)
            .map(|((y, ki), s)| y - s / (ki * 2))
            .collect();
        SolitonSpec::new(self.kappa.clone(), self.k.iter().map(|ki| ki * 2).collect(), y0, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SolitonSpec::from_f64(0.5, &[1.0, 1.5], &[0.0, 0.0]).is_ok());
        assert!(matches!(SolitonSpec::from_f64(0.5, &[1.0, 2.0], &[0.0, 0.0]), Err(Error::InvalidSpec(_))));
        assert!(matches!(SolitonSpec::from_f64(0.5, &[1.0, 1.0], &[0.0, 0.0]), Err(Error::Degenerate(_))));
        assert!(matches!(SolitonSpec::from_f64(0.5, &[1.5, 1.0], &[0.0, 0.0]), Err(Error::InvalidSpec(_))));
        assert!(SolitonSpec::from_f64(-0.5, &[1.0], &[0.0]).is_err());
        assert!(SolitonSpec::from_f64(0.5, &[1.0], &[]).is_err());
        assert!(SubsetFormSpec::from_f64(0.5, &[0.9], &[0.0]).is_ok());
        assert!(SubsetFormSpec::from_f64(0.5, &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn derived_speeds_exceed_threshold() {
        let s = SolitonSpec::from_f64(0.4, &[0.5, 1.0, 2.0], &[0.0; 3]).unwrap();
        let floor = s.kappa().square() * 2;
        assert!(s.speeds().iter().all(|c| *c > floor));
        assert!(s.phi().iter().all(|p| p.is_positive()));
    }

    #[test]
    fn conventions_round_trip() {
        let s = SubsetFormSpec::from_f64(0.5, &[0.2, 0.5, 0.8], &[0.1, -0.3, 0.4]).unwrap();
        let h = s.to_hirota(Real::zero()).unwrap();
        for (a, b) in s.speeds().iter().zip(h.speeds()) {
            assert!(a.approx_eq(b, 1e-70));
        }
        let back = h.to_subset_form().unwrap();
        for (a, b) in s.y0().iter().zip(back.y0()) {
            assert!(a.approx_eq(b, 1e-70));
        }
    }
}
