use chlab_core::corpus::Corpus;
use chlab_core::soliton::{
    eval_parametric, eval_physical, hirota_g, pde_residual, relationship_residual, subset_g, wronskian_forms,
    InversionConfig,
};
use chlab_core::{build_soliton_for_peakon, PeakonSpec, Real, SolitonSpec, SubsetFormSpec};
use proptest::prelude::*;

fn subset_strategy() -> impl Strategy<Value = SubsetFormSpec> {
    any::<u64>().prop_map(|seed| Corpus::new(seed).subset_form_spec(5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_routes_agree(spec in subset_strategy(), y in -2.0f64..2.0, t in -1.0f64..1.0) {
        // subset sums, bilinear sums after conversion, and Wronskians
        let (y, t) = (Real::from_f64(y), Real::from_f64(t));
        let s = subset_g(&spec, &y, &t);
        let h = hirota_g(&spec.to_hirota(Real::zero()).unwrap(), &y, &t);
        prop_assert!(s.log_g1.approx_eq(&h.log_g1, 1e-35));
        prop_assert!(s.log_g2.approx_eq(&h.log_g2, 1e-35));
        prop_assert!(relationship_residual(&spec, &y, &t).unwrap() < Real::parse("1e-35").unwrap());
    }

    #[test]
    fn jacobian_matches_bilinear_slope(spec in subset_strategy(), y in -2.0f64..2.0) {
        // dx/dy = 1 / r with r from Wronskians and dx/dy from the bilinear sums
        let (y, t) = (Real::from_f64(y), Real::zero());
        let r = wronskian_forms(&spec, &y, &t).unwrap().r;
        prop_assert!(r.is_positive());
        let hs = spec.to_hirota(Real::zero()).unwrap();
        let g = hirota_g(&hs, &y, &t);
        let dxdy = hs.kappa().recip() + &g.dy_log_g1 - &g.dy_log_g2;
        prop_assert!(dxdy.approx_eq(&r.recip(), 1e-35));
    }

    #[test]
    fn parametric_map_increases(seed in any::<u64>()) {
        let spec = Corpus::new(seed).subset_form_spec(4).to_hirota(Real::zero()).unwrap();
        let t = Real::zero();
        let xs: Vec<Real> = (-60..=60).map(|i| eval_parametric(&spec, &Real::ratio(i, 20), &t).0).collect();
        prop_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let g = hirota_g(&spec, &Real::ratio(1, 3), &t);
        prop_assert!(g.log_g1 <= g.log_g2);
    }
}

fn single(kappa: &str) -> SolitonSpec {
    build_soliton_for_peakon(&PeakonSpec::from_f64(&[2.0], &[0.0]).unwrap(), &Real::parse(kappa).unwrap()).unwrap()
}

#[test]
fn single_soliton_positive_and_unimodal() {
    let spec = single("0.4");
    let us: Vec<Real> = (-200..=200)
        .map(|i| eval_parametric(&spec, &Real::ratio(i, 50), &Real::zero()).1)
        .collect();
    assert!(us.iter().all(Real::is_positive));
    let peak = us.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!(us[..=peak].windows(2).all(|w| w[0] < w[1]));
    assert!(us[peak..].windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn single_soliton_symmetric_about_crest() {
    let spec = single("0.4");
    let cfg = InversionConfig::default();
    let t = Real::zero();
    let u = |x: &Real| eval_physical(&spec, x, &t, &cfg).unwrap();
    // golden-section search for the crest
    let r = (Real::from_i64(5).sqrt() - 1) / 2;
    let (mut a, mut b) = (Real::from_i64(-1), Real::from_i64(2));
    for _ in 0..120 {
        let c = &b - &r * (&b - &a);
        let d = &a + &r * (&b - &a);
        if u(&c) > u(&d) {
            b = d;
        } else {
            a = c;
        }
    }
    let crest = (a + b).mul_pow2(-1);
    for s in ["0.1", "0.7", "2.5"] {
        let s = Real::parse(s).unwrap();
        let gap = (u(&(&crest + &s)) - u(&(&crest - &s))).abs();
        assert!(gap < Real::parse("1e-20").unwrap(), "{gap}");
    }
}

#[test]
fn translation_shifts_x_by_alpha() {
    let spec = single("0.5");
    let moved = spec.with_alpha(Real::parse("0.75").unwrap());
    let y = Real::parse("0.3").unwrap();
    let (x0, u0) = eval_parametric(&spec, &y, &Real::zero());
    let (x1, u1) = eval_parametric(&moved, &y, &Real::zero());
    assert_eq!(u0, u1);
    assert!((x1 - x0).approx_eq(&Real::parse("0.75").unwrap(), 1e-70));
}

#[test]
fn residual_converges_at_second_order() {
    let spec = single("0.5");
    let cfg = InversionConfig::default();
    let (x, t) = (Real::parse("0.3").unwrap(), Real::zero());
    let r1 = pde_residual(&spec, &x, &t, &Real::parse("1e-2").unwrap(), &cfg).unwrap();
    let r2 = pde_residual(&spec, &x, &t, &Real::parse("5e-3").unwrap(), &cfg).unwrap();
    let ratio = (r1 / r2).abs().to_f64();
    assert!((3.6..4.4).contains(&ratio), "{ratio}");
}

#[test]
fn residual_vanishes_in_vacuum() {
    let spec = single("0.5");
    let r = pde_residual(&spec, &Real::from_i64(-300), &Real::zero(), &Real::parse("1e-2").unwrap(), &InversionConfig::default())
        .unwrap();
    assert!(r.abs() < Real::parse("1e-60").unwrap());
}
