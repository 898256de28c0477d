//! Seeded random instances for property checks and the verification
//! commands. Every generator draws from a ChaCha8 stream, so a seed fully
//! determines the corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hankel::SpectralData;
use crate::numkit::Real;
use crate::peakon::PeakonSpec;
use crate::soliton::SubsetFormSpec;

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn count(&mut self, max_n: usize) -> usize {
        self.rng.gen_range(1..=max_n.max(1))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> Real {
        Real::from_f64(self.rng.gen_range(lo..=hi))
    }

    /// `n` sorted values in `[lo, hi]`, pairwise at least `gap` apart.
    fn spread(&mut self, n: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
        assert!((n as f64 - 1.0) * gap < hi - lo, "range too narrow for {n} values");
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| self.rng.gen_range(lo..=hi)).collect();
            v.sort_by(f64::total_cmp);
            if v.windows(2).all(|w| w[1] - w[0] >= gap) {
                return v;
            }
        }
    }

    /// Speeds in `[0.5, 4]` with gaps of at least `gap`, phases in `[-1, 1]`.
    pub fn peakon_spec_with_gap(&mut self, max_n: usize, gap: f64) -> PeakonSpec {
        let n = self.count(max_n);
        self.peakon_spec_sized(n, gap)
    }

    pub fn peakon_spec_sized(&mut self, n: usize, gap: f64) -> PeakonSpec {
        let speeds = self.spread(n, 0.5, 4.0, gap);
        let phases: Vec<f64> = (0..n).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
        PeakonSpec::from_f64(&speeds, &phases).expect("valid by construction")
    }

    pub fn peakon_spec(&mut self, max_n: usize) -> PeakonSpec {
        self.peakon_spec_with_gap(max_n, 0.15)
    }

    /// `lambda_i = 2 / c_i` from [`Corpus::peakon_spec`] speeds, `ln E_i` in `[-2, 2]`.
    pub fn spectral_data(&mut self, max_n: usize) -> SpectralData {
        let n = self.count(max_n);
        self.spectral_data_sized(n)
    }

    pub fn spectral_data_sized(&mut self, n: usize) -> SpectralData {
        let speeds = self.spread(n, 0.5, 4.0, 0.15);
        let lambda = speeds.iter().map(|c| Real::from_i64(2) / Real::from_f64(*c)).collect();
        let log_e = (0..n).map(|_| self.uniform(-2.0, 2.0)).collect();
        SpectralData::new(lambda, log_e).expect("valid by construction")
    }

    /// `kappa` in `[0.3, 0.7]`, `2 kappa k_i` in `[0.05, 0.95]` spaced by at
    /// least 0.05, phases in `[-1, 1]`.
    pub fn subset_form_spec(&mut self, max_n: usize) -> SubsetFormSpec {
        let n = self.count(max_n);
        self.subset_form_spec_sized(n)
    }

    pub fn subset_form_spec_sized(&mut self, n: usize) -> SubsetFormSpec {
        let kappa: f64 = self.rng.gen_range(0.3..=0.7);
        let u = self.spread(n, 0.05, 0.95, 0.05);
        let k: Vec<f64> = u.iter().map(|u| u / (2.0 * kappa)).collect();
        let y0: Vec<f64> = (0..n).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
        SubsetFormSpec::from_f64(kappa, &k, &y0).expect("valid by construction")
    }

    /// `(y, t)` pairs with `y` in `[-2, 2]` and `t` in `[-1, 1]`.
    pub fn samples(&mut self, count: usize) -> Vec<(Real, Real)> {
        (0..count)
            .map(|_| (self.uniform(-2.0, 2.0), self.uniform(-1.0, 1.0)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a: Vec<_> = (0..5).map(|_| Corpus::new(7).peakon_spec(5).speeds().to_vec()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut c = Corpus::new(7);
        let first = c.spectral_data(6);
        let second = c.spectral_data(6);
        assert!(first.len() != second.len() || first.lambda() != second.lambda());
    }

    #[test]
    fn respects_bounds() {
        let mut c = Corpus::new(1);
        for _ in 0..50 {
            let s = c.subset_form_spec(5);
            assert!(s.len() <= 5);
            let p = c.peakon_spec_with_gap(4, 0.4);
            let mut v: Vec<f64> = p.speeds().iter().map(Real::to_f64).collect();
            v.sort_by(f64::total_cmp);
            assert!(v.windows(2).all(|w| w[1] - w[0] >= 0.4));
        }
    }
}
