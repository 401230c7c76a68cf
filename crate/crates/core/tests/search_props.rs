use kronloc_core::search::{self, SearchMode, SearchOptions, TargetInstance};
use proptest::prelude::*;

fn lambdas() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.3f64..5.0, 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_revalidate(l in lambdas(), seed in prop::collection::vec(0.0f64..1.0, 2), d in 0.0f64..100.0) {
        let betas: Vec<f64> = seed[..l.len()].to_vec();
        let target = TargetInstance::new(l.clone(), betas.clone(), d, 400.0, 4).unwrap();
        for mode in [SearchMode::FirstHit, SearchMode::BestInInterval] {
            if let Ok(w) = search::find_witness(&target, mode, &SearchOptions::default()) {
                let (_, disc) = search::discrepancy(w.t, &l, &betas);
                prop_assert!((disc.sup - w.sup_discrepancy).abs() < 1e-12);
                prop_assert!(w.sup_discrepancy <= 0.25);
                prop_assert!(w.t >= d && w.t <= d + 400.0);
            }
        }
    }

    #[test]
    fn refinement_never_worsens(l in lambdas(), seed in prop::collection::vec(0.0f64..1.0, 2), d in 0.0f64..10.0) {
        let betas: Vec<f64> = seed[..l.len()].to_vec();
        let target = TargetInstance::new(l.clone(), betas.clone(), d, 50.0, 4).unwrap();
        let res = search::find_witness(&target, SearchMode::BestInInterval, &SearchOptions::default());
        let w = match res {
            Ok(w) => w,
            Err(search::SearchError::NotFound { best, .. }) => *best,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let n = w.points_scanned;
        let coarse = (0..n)
            .map(|i| {
                let t = if i + 1 == n { d + 50.0 } else { d + 50.0 * (i as f64 / (n - 1) as f64) };
                search::discrepancy(t, &l, &betas).1.sup
            })
            .fold(f64::INFINITY, f64::min);
        prop_assert!(w.sup_discrepancy <= coarse + 1e-15);
    }

    #[test]
    fn integer_shifts_of_targets(l in lambdas(), seed in prop::collection::vec(0.0f64..1.0, 2), shift in -5i32..5) {
        let betas: Vec<f64> = seed[..l.len()].to_vec();
        let shifted: Vec<f64> = betas.iter().map(|b| b + f64::from(shift)).collect();
        let a = search::find_witness(&TargetInstance::new(l.clone(), betas, 0.0, 200.0, 4).unwrap(), SearchMode::FirstHit, &SearchOptions::default());
        let b = search::find_witness(&TargetInstance::new(l, shifted, 0.0, 200.0, 4).unwrap(), SearchMode::FirstHit, &SearchOptions::default());
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.t, b.t);
                prop_assert!((a.sup_discrepancy - b.sup_discrepancy).abs() < 1e-9);
            }
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn omega_two_is_immediate(l in lambdas(), seed in prop::collection::vec(-3.0f64..3.0, 2), d in -50.0f64..50.0) {
        let betas: Vec<f64> = seed[..l.len()].to_vec();
        let target = TargetInstance::new(l, betas, d, 10.0, 2).unwrap();
        let w = search::find_witness(&target, SearchMode::FirstHit, &SearchOptions::default()).unwrap();
        prop_assert_eq!(w.t, d);
        prop_assert_eq!(w.points_scanned, 1);
    }
}
