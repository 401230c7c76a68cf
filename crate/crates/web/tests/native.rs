use kronloc_web::*;

#[test]
fn pmf_m2_k2() {
    let v = fejer_pmf(2, 2).unwrap();
    assert_eq!(v, vec![1.0 / 16.0, 0.25, 0.375, 0.25, 1.0 / 16.0, 0.375]);
}

#[test]
fn kernel_curve_endpoints() {
    let c = fejer_kernel_curve(2, 1, 3).unwrap();
    assert!((c[0] - 1.0).abs() < 1e-12);
    assert!(c[2].abs() < 1e-12);
    assert!(fejer_kernel_curve(2, 1, 1).is_err());
}

#[test]
fn p_zero_above_lower_bound() {
    let v = fejer_p_zero(8, 3, 0.2).unwrap();
    assert!(v[0] >= v[1]);
}

#[test]
fn dirichlet_curve_at_zero_is_l() {
    let c = dirichlet_curve(6, 0.0, 1.0, 5).unwrap();
    assert!((c[0] - 6.0).abs() < 1e-12);
    assert!(dirichlet_curve(0, 0.0, 1.0, 5).is_err());
}

#[test]
fn lift_matches_polynomial() {
    let v = dirichlet_lift(10, 0.37, 8).unwrap();
    assert!((v[0] - v[1]).abs() < 1e-10);
    assert_eq!(v[3], 4.0);
    assert!((v[2] - 2.0 * std::f64::consts::PI / 8.0 * 15.0).abs() < 1e-12);
}

#[test]
fn witness_on_logs() {
    let (l1, l2) = (2f64.ln(), 3f64.ln());
    let v = witness_2d(l1, l2, 0.5, 0.5, 4, 0.0, 1000.0).unwrap();
    assert!(v[1] <= 0.25 && v[2] <= 0.25);
    let o = orbit_2d(l1, l2, v[0], v[0], 2).unwrap();
    assert!((o[0] - 0.5).abs() <= 0.25 + 1e-12);
    assert!(witness_2d(l1, l2, 0.5, 0.5, 8, 0.0, 0.01).is_err());
}
