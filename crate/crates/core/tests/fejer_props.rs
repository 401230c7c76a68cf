use kronloc_core::fejer::{self, FejerConfig, FejerLaw, PZeroMethod};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn exact_mass_and_symmetry_grid() {
    let cfg = FejerConfig::default();
    for m in 1..=8 {
        for k in 1..=6 {
            let d = fejer::convolve(FejerLaw::new(m).unwrap(), k, &cfg).unwrap();
            assert_eq!(d.total_mass(), BigRational::one(), "m={m} k={k}");
            assert!(d.is_symmetric());
            for nu in 0..=d.radius() {
                assert_eq!(d.count(nu), d.count(-nu));
            }
        }
    }
}

#[test]
fn routes_agree_grid() {
    let cfg = FejerConfig::default();
    for m in 1..=8 {
        for k in 1..=6 {
            let e = fejer::p_zero(m, k, PZeroMethod::Exact, &cfg).unwrap().to_f64();
            let q = fejer::p_zero(m, k, PZeroMethod::Quadrature, &cfg).unwrap().to_f64();
            assert!((e - q).abs() < 1e-9, "m={m} k={k}: {e} vs {q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fourier_identity(m in 1u32..=6, k in 1u32..=4, t in 0.0f64..1.0) {
        let d = fejer::convolve(FejerLaw::new(m).unwrap(), k, &FejerConfig::default()).unwrap();
        prop_assert!((d.char_fn_fourier(t) - d.char_fn(t)).abs() < 1e-12);
    }

    #[test]
    fn char_fn_in_unit_interval(m in 1u32..=40, k in 1u32..=20, t in -3.0f64..3.0) {
        let d = fejer::convolve(FejerLaw::new(m).unwrap(), k, &FejerConfig::default()).unwrap();
        let v = d.char_fn(t);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&v));
        prop_assert!((v - d.char_fn(t + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn decay(m in 1u32..=64, k in 1u32..=10, t in 0.0f64..0.5) {
        prop_assert!(fejer::decay_bound_check(m, k, t));
    }

    #[test]
    fn lower_bound_default_constants(m in 1u32..=64, k in 1u32..=200) {
        let cfg = FejerConfig::default();
        let p = fejer::p_zero(m, k, PZeroMethod::Quadrature, &cfg).unwrap().to_f64();
        prop_assert!(p >= fejer::p_zero_lower_bound(m, k, 0.2));
    }
}
