//! Fixtures shared by the benchmarks.

use chlab_core::corpus::Corpus;
use chlab_core::{build_soliton_for_peakon, PeakonSpec, Real, SolitonSpec, SpectralData};

/// Spectral data with `n` eigenvalues from a fixed seed.
pub fn spectral_data(n: usize) -> SpectralData {
    Corpus::new(11).spectral_data_sized(n)
}

/// A target with speeds `1, 2, ..., n` and zero phases.
pub fn peakon(n: usize) -> PeakonSpec {
    let speeds: Vec<f64> = (1..=n).map(|c| c as f64).collect();
    PeakonSpec::from_f64(&speeds, &vec![0.0; n]).expect("valid speeds")
}

/// The soliton converging to [`peakon`]`(n)` at dispersion `kappa`.
pub fn soliton(n: usize, kappa: f64) -> SolitonSpec {
    build_soliton_for_peakon(&peakon(n), &Real::from_f64(kappa)).expect("kappa within the constraint")
}
