use chlab_core::corpus::Corpus;
use chlab_core::hankel::{
    hankel_det, hankel_det_naive, hankel_det_time_deriv, identity_suite, log_hankel_det, moment, HankelIndex,
    SpectralData, SuiteConfig,
};
use chlab_core::Real;
use proptest::prelude::*;

fn data_strategy() -> impl Strategy<Value = SpectralData> {
    (1usize..=5, any::<u64>()).prop_map(|(n, seed)| Corpus::new(seed).spectral_data_sized(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinants_positive_up_to_rank(data in data_strategy(), m in -2i64..=3) {
        for n in 0..=data.len() as i64 {
            prop_assert!(hankel_det(&data, HankelIndex::new(n, m)).is_positive());
        }
        prop_assert!(hankel_det(&data, HankelIndex::new(data.len() as i64 + 1, m)).is_zero());
        prop_assert!(log_hankel_det(&data, HankelIndex::new(-1, m)).is_none());
    }

    #[test]
    fn expansion_matches_elimination(data in data_strategy(), m in -2i64..=3) {
        for n in 1..=data.len() as i64 {
            let idx = HankelIndex::new(n, m);
            let fast = hankel_det(&data, idx);
            let slow = hankel_det_naive(&data, idx).unwrap();
            prop_assert!(fast.approx_eq(&slow, 1e-40));
        }
    }

    #[test]
    fn weight_scaling_is_homogeneous(data in data_strategy(), m in -2i64..=3, s in 0.1f64..3.0) {
        // every E_i scaled by s multiplies D_n^m by s^n
        let log_s = Real::from_f64(s).ln();
        let scaled = data.scaled(&log_s);
        for n in 0..=data.len() as i64 {
            let idx = HankelIndex::new(n, m);
            let expect = hankel_det(&data, idx) * Real::from_f64(s).powi(n as i32);
            prop_assert!(hankel_det(&scaled, idx).approx_eq(&expect, 1e-60));
        }
    }

    #[test]
    fn identity_suite_holds(data in data_strategy()) {
        let report = identity_suite(&data, data.len(), &SuiteConfig::default()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.violations.first());
    }
}

#[test]
fn time_derivative_matches_central_difference() {
    let mut corpus = Corpus::new(11);
    for n in 1..=4 {
        let data = corpus.spectral_data_sized(n);
        for m in [-1, 0, 2] {
            let idx = HankelIndex::new(n as i64, m);
            let analytic = hankel_det_time_deriv(&data, idx);
            // a central difference converges at O(h^2): halving h cuts the error by ~4
            let err = |h: &str| {
                let h = Real::parse(h).unwrap();
                let fd = (hankel_det(&data.advanced(&h), idx) - hankel_det(&data.advanced(&-&h), idx)) / (&h * 2);
                (fd - &analytic).abs()
            };
            let (coarse, fine) = (err("1e-3"), err("5e-4"));
            let ratio = (coarse / fine).to_f64();
            assert!((3.5..4.5).contains(&ratio), "n = {n}, m = {m}: ratio {ratio}");
        }
    }
}

#[test]
fn moments_follow_rates() {
    let data = SpectralData::new(
        vec![Real::from_i64(1), Real::from_i64(2)],
        vec![Real::zero(), Real::from_i64(2).ln()],
    )
    .unwrap();
    // A_m = 1 + 2 * 2^m
    for m in -2..=4 {
        let expect = Real::one() + Real::from_i64(2) * Real::from_i64(2).powi(m as i32);
        assert!(moment(&data, m).approx_eq(&expect, 1e-70));
    }
    // the time derivative doubles as the moment of one lower order: d/dt A_m = 2 A_{m-1}
    let h = Real::parse("1e-25").unwrap();
    let fd = (moment(&data.advanced(&h), 2) - moment(&data.advanced(&-&h), 2)) / (&h * 2);
    assert!(fd.approx_eq(&(moment(&data, 1) * 2), 1e-40));
}
