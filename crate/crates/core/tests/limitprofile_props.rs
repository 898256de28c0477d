use chlab_core::corpus::Corpus;
use chlab_core::limitprofile::equivalence_check;
use chlab_core::{build_limit_profile, peakon_state, PeakonSpec, Real};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = PeakonSpec> {
    any::<u64>().prop_map(|seed| Corpus::new(seed).peakon_spec(5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_peakon_on_random_points(spec in spec_strategy(), t in -2.0f64..2.0,
                                       xs in prop::collection::vec(-8.0f64..12.0, 1..40)) {
        let t = Real::from_f64(t);
        let grid: Vec<Real> = xs.into_iter().map(Real::from_f64).collect();
        let r = equivalence_check(&spec, &t, &grid, &Real::parse("1e-35").unwrap()).unwrap();
        prop_assert!(r.passed(), "{} at {}", r.max_relative, r.worst_x);
    }

    #[test]
    fn breakpoints_are_peakon_positions(spec in spec_strategy(), t in -2.0f64..2.0) {
        let t = Real::from_f64(t);
        let profile = build_limit_profile(&spec, &t).unwrap();
        let state = peakon_state(&spec, &t).unwrap();
        for (b, x) in profile.breakpoints().iter().zip(&state.positions) {
            prop_assert!(b.approx_eq(x, 1e-60));
        }
    }

    #[test]
    fn continuous_with_crest_jump(spec in spec_strategy()) {
        // branches agree at each breakpoint and the slope drops by 2 m_n there
        let t = Real::zero();
        let profile = build_limit_profile(&spec, &t).unwrap();
        let state = peakon_state(&spec, &t).unwrap();
        let h = Real::parse("1e-20").unwrap();
        for (k, b) in profile.breakpoints().iter().enumerate() {
            let left = profile.branch_value(k + 1, b);
            let right = profile.branch_value(k + 2, b);
            prop_assert!(left.approx_eq(&right, 1e-40));
            let slope = |branch: usize| {
                (profile.branch_value(branch, &(b + &h)) - profile.branch_value(branch, &(b - &h))) / (&h * 2)
            };
            let jump = slope(k + 2) - slope(k + 1);
            prop_assert!(jump.approx_eq(&(-(&state.amplitudes[k] * 2)), 1e-30));
        }
    }

    #[test]
    fn h_signs_locate_x(spec in spec_strategy(), x in -6.0f64..8.0) {
        // x < xbar_n exactly when h_n < 0
        let x = Real::from_f64(x);
        let profile = build_limit_profile(&spec, &Real::zero()).unwrap();
        let h = profile.h_coefficients(&x);
        for (n, b) in profile.breakpoints().iter().enumerate() {
            prop_assert_eq!(x < *b, h[n + 1].is_negative());
        }
        prop_assert!(h[spec.len() + 1].is_negative());
    }
}

#[test]
fn branch_indices_are_half_open() {
    let spec = PeakonSpec::from_f64(&[1.0, 2.0], &[0.0, 0.0]).unwrap();
    let profile = build_limit_profile(&spec, &Real::zero()).unwrap();
    let b = profile.breakpoints().to_vec();
    assert_eq!(profile.branch_of(&(&b[0] - Real::one())), 1);
    assert_eq!(profile.branch_of(&b[0]), 1);
    assert_eq!(profile.branch_of(&b[1]), 2);
    assert_eq!(profile.branch_of(&(&b[1] + Real::parse("1e-60").unwrap())), 3);
}
