use std::f64::consts::PI;

use kronloc_core::lattice::{FrequencyKind, LatticeConfig, LinearFormInstance};
use kronloc_core::poly::{self, DirichletPolynomial, GeneralizedPolynomial, TorusSampler, TransferOptions};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coefficients(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..=max_len)
}

#[test]
fn lift_identity_random_tau() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in [1usize, 2, 6, 10, 17, 30] {
        let coeffs: Vec<Complex64> = (0..l).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let p = DirichletPolynomial::new(coeffs).unwrap();
        for _ in 0..100 {
            let tau: f64 = rng.random_range(-50.0..50.0);
            let gap = (p.evaluate(2.0 * PI * tau) - p.bohr_lift(&p.lift_point(tau))).norm();
            assert!(gap < 1e-10, "L={l} τ={tau}: {gap}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interval_sup_below_torus_sup(c in coefficients(8), d in 0.0f64..50.0, seed in any::<u64>()) {
        let p = DirichletPolynomial::new(c).unwrap();
        let i = poly::sup_interval(&p.poly, d, 20.0, 0.02, 1_000_000).unwrap();
        let start = p.lift_point(i.argmax / (2.0 * PI));
        let t = poly::sup_torus_from(&p.poly, &[start], TorusSampler::Random { budget: 300, seed }, 1_000_000).unwrap();
        let bound: f64 = p.poly.coefficients.iter().map(|a| a.norm()).sum();
        prop_assert!(i.value <= t.value + 1e-9, "{:?} {:?}", i, t);
        prop_assert!(t.value <= bound + 1e-9);
    }

    #[test]
    fn torus_sup_monotone_in_budget(c in coefficients(6), seed in any::<u64>()) {
        let p = DirichletPolynomial::new(c).unwrap();
        let small = poly::sup_torus(&p.poly, TorusSampler::Random { budget: 20, seed }, 1_000_000).unwrap();
        let large = poly::sup_torus(&p.poly, TorusSampler::Random { budget: 200, seed }, 1_000_000).unwrap();
        prop_assert!(large.value >= small.value);
    }

    #[test]
    fn transfer_gap_within_bound(c in coefficients(6), theta in prop::collection::vec(0.0f64..1.0, 3), omega in 3u64..=6, d in 0.0f64..100.0) {
        let p = DirichletPolynomial::new(c).unwrap();
        let theta = &theta[..p.poly.n_frequencies()];
        if let Ok(r) = poly::kronecker_transfer_check(&p, theta, omega, d, Some(1e6), &TransferOptions::default()) {
            prop_assert!(r.margin >= 0.0, "{:?}", r);
        }
    }

    #[test]
    fn generalized_frequencies_distinct(rows in prop::collection::btree_set((-3i64..=3, -3i64..=3), 1..12)) {
        let inst = LinearFormInstance::from_specs(&[FrequencyKind::Log(2), FrequencyKind::Log(3)], 128).unwrap();
        let exps: Vec<Vec<i64>> = rows.iter().map(|&(a, b)| vec![a, b]).collect();
        let g = GeneralizedPolynomial::new(inst.values_f64(), exps, vec![Complex64::new(1.0, 0.0); rows.len()]).unwrap();
        let ok = g.injectivity_check(&inst, &LatticeConfig::default()).unwrap();
        prop_assert_eq!(ok, kronloc_core::lattice::Independence::Independent);
        let mut b = g.frequencies();
        b.sort_by(f64::total_cmp);
        prop_assert!(b.windows(2).all(|w| w[1] - w[0] > 1e-9));
    }
}
