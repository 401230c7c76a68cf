use kronloc_core::lattice::{self, Fixed, FrequencyKind, LatticeConfig, LinearFormInstance, ZeroPolicy};
use proptest::prelude::*;

const BITS: u32 = 192;

fn golden() -> LinearFormInstance {
    let phi = Fixed::sqrt_int(5, BITS).add(&Fixed::from_int(1, BITS)).half();
    LinearFormInstance::from_values(vec![Fixed::from_int(1, BITS), phi]).unwrap()
}

/// `|F_n φ - F_{n+1}|` from the convergent recurrence, in f64.
fn fibonacci_gap(n: usize) -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    (a as f64 * phi - b as f64).abs()
}

#[test]
fn monotone_in_bound() {
    let inst = golden();
    let cfg = LatticeConfig::default();
    let values: Vec<f64> = (1..=10).map(|u| lattice::xi(&inst, u, &cfg).unwrap().value).collect();
    assert!(values.windows(2).all(|w| w[0] >= w[1]), "{values:?}");
}

#[test]
fn golden_convergent_oracle() {
    let inst = golden();
    let cfg = LatticeConfig::default();
    let (mut a, mut b) = (1u64, 1u64);
    for n in 1..=12 {
        // U = F_{n+1} - 1 with F_1 = F_2 = 1 admits F_n but not F_{n+1}
        (a, b) = (b, a + b);
        let u = (b - 1).max(a);
        let r = lattice::xi(&inst, u, &cfg).unwrap();
        let expected = fibonacci_gap(n);
        assert!((r.value - expected).abs() < 1e-12 * expected.max(1.0), "n={n} U={u}: {} vs {expected}", r.value);
    }
}

#[test]
fn policies_agree_on_logs() {
    for primes in [vec![2u64, 3], vec![2, 3, 5], vec![2, 4], vec![2, 3, 6], vec![4, 8, 3]] {
        let kinds: Vec<FrequencyKind> = primes.iter().map(|&p| FrequencyKind::Log(p)).collect();
        let inst = LinearFormInstance::from_specs(&kinds, 128).unwrap();
        let top = if primes.len() == 2 { 20 } else { 8 };
        for u in [1, 2, 3, top] {
            let exact = lattice::xi(
                &inst,
                u,
                &LatticeConfig { zero_policy: Some(ZeroPolicy::ExactMultiplicative), ..Default::default() },
            );
            let thr =
                lattice::xi(&inst, u, &LatticeConfig { zero_policy: Some(ZeroPolicy::Threshold), ..Default::default() });
            match (exact, thr) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a.witness, b.witness, "{primes:?} U={u}");
                    assert_eq!(a.value_decimal, b.value_decimal);
                }
                (Err(a), Err(b)) => assert_eq!(a, b),
                (a, b) => panic!("{primes:?} U={u}: {a:?} vs {b:?}"),
            }
        }
    }
}

fn small_decimals() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![(-40.0f64..-0.01), (0.01f64..40.0)],
        1..=3,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sign_and_permutation_symmetry(values in small_decimals(), u in 1u64..=6, rot in 0usize..3) {
        let inst = LinearFormInstance::from_f64(&values, BITS).unwrap();
        let cfg = LatticeConfig::default();
        let base = lattice::xi(&inst, u, &cfg);
        let neg = lattice::xi(&inst.negated(), u, &cfg);
        let n = values.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let per = lattice::xi(&inst.permuted(&perm), u, &cfg);
        match (base, neg, per) {
            (Ok(a), Ok(b), Ok(c)) => {
                prop_assert_eq!(&a.value_decimal, &b.value_decimal);
                prop_assert_eq!(&a.value_decimal, &c.value_decimal);
            }
            (Err(_), Err(_), Err(_)) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn witness_reproduces_value(values in small_decimals(), u in 1u64..=8) {
        let inst = LinearFormInstance::from_f64(&values, BITS).unwrap();
        if let Ok(r) = lattice::xi(&inst, u, &LatticeConfig::default()) {
            prop_assert!(r.witness.iter().all(|c| c.unsigned_abs() <= u));
            prop_assert!(r.witness.iter().any(|&c| c != 0));
            let again = inst.combination(&r.witness).abs();
            let tol = Fixed::half_precision_threshold(BITS);
            prop_assert!(again.sub(&r.value_fixed).abs().cmp_abs(&tol).is_le());
            let brute = brute_force(&values, u);
            prop_assert!((r.value - brute).abs() <= 1e-9 * brute.max(1.0), "{} vs {}", r.value, brute);
        }
    }
}

fn brute_force(values: &[f64], u: u64) -> f64 {
    let u = u as i64;
    let n = values.len();
    let mut best = f64::INFINITY;
    let mut c = vec![-u; n];
    loop {
        if c.iter().any(|&x| x != 0) {
            let s: f64 = c.iter().zip(values).map(|(&a, &l)| a as f64 * l).sum::<f64>().abs();
            if s > 1e-9 {
                best = best.min(s);
            }
        }
        let mut i = 0;
        while i < n && c[i] == u {
            c[i] = -u;
            i += 1;
        }
        if i == n {
            return best;
        }
        c[i] += 1;
    }
}
