use std::f64::consts::PI;

use kronloc_core::lattice::{self, LatticeConfig, LinearFormInstance};
use kronloc_core::replay::{self, ReplayConfig, WeightedSumDistribution};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn frequencies() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2f64..3.0, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distribution_sums_to_one(l in frequencies(), m in 1u32..=3, k in 1u32..=2) {
        let inst = LinearFormInstance::from_f64(&l, 128).unwrap();
        let wsd = WeightedSumDistribution::from_parameters(&inst, m, k, &ReplayConfig::default()).unwrap();
        prop_assert_eq!(wsd.total_mass(), BigRational::one());
    }

    #[test]
    fn small_deviation_monotone(l in frequencies(), m in 2u32..=3, eps in prop::collection::vec(0.001f64..10.0, 6)) {
        let inst = LinearFormInstance::from_f64(&l, 128).unwrap();
        let wsd = WeightedSumDistribution::from_parameters(&inst, m, 1, &ReplayConfig::default()).unwrap();
        let mut eps = eps;
        eps.sort_by(f64::total_cmp);
        let mut prev = BigRational::zero();
        for e in eps {
            let p = replay::small_deviation(&wsd, e).unwrap();
            prop_assert!(p >= prev);
            prev = p;
        }
        let top = replay::small_deviation(&wsd, wsd.max_abs() + 0.5).unwrap();
        prop_assert_eq!(top, BigRational::one());
    }

    #[test]
    fn sinc_chain(l in frequencies(), m in 2u32..=3, k in 1u32..=2, t in 0.1f64..30.0) {
        let inst = LinearFormInstance::from_f64(&l, 128).unwrap();
        let cfg = ReplayConfig::default();
        let wsd = WeightedSumDistribution::from_parameters(&inst, m, k, &cfg).unwrap();
        let sinc = replay::sinc_expectation(&wsd, t);
        let inv = replay::inverse_moment(&wsd);
        prop_assert!(sinc <= inv * (1.0 + 1e-12));
        if let Ok(xi) = lattice::xi(&inst, u64::from((m - 1) * k), &LatticeConfig::default()) {
            prop_assert!(inv <= 1.0 / (PI * xi.value) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn decomposition_and_h_bounds(l in prop::collection::vec(0.2f64..3.0, 1..=2), betas in prop::collection::vec(0.0f64..1.0, 2), m in 2u32..=3, k in 1u32..=2, d in 0.0f64..20.0, t in 0.5f64..20.0) {
        let inst = LinearFormInstance::from_f64(&l, 128).unwrap();
        let b = &betas[..l.len()];
        match replay::key_inequality_check(m, k, &inst, b, d, t, None, &ReplayConfig::default()) {
            Ok(r) => {
                for c in &r.decomposition {
                    prop_assert!(c.residual < replay::DECOMPOSITION_TOLERANCE, "{:?}", c);
                }
                prop_assert!(r.h.within_bound && r.h_j.iter().all(|h| h.within_bound), "{:?}", r);
            }
            // a relation among the frequencies inside the coefficient range
            Err(replay::ReplayError::Lattice(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
