use approx::assert_relative_eq;
use proptest::prelude::*;

use burstic::arrival::power_rate_experiment;
use burstic::model::*;

#[test]
fn capacity_values() {
    assert_eq!(capacity_c(0.0).unwrap(), 0.0);
    assert_relative_eq!(capacity_c(3.0).unwrap(), 1.0, epsilon = 1e-15);
    assert_relative_eq!(capacity_c(1.0).unwrap(), 0.5, epsilon = 1e-15);
    assert!(capacity_c(-1e-9).is_err());
}

#[test]
fn rate_pair_examples() {
    for g in [0.0, 1.0, 50.0] {
        let rp = rate_pair(1.0, g, 0.0).unwrap();
        assert_relative_eq!(rp.phi, 0.5, epsilon = 1e-15);
        assert_eq!(rp.phi, rp.psi);
    }
    let g0 = 2.0 + 2.0 * 2f64.sqrt();
    let rp = rate_pair(g0, g0, 0.5).unwrap();
    assert!((rp.psi - 0.6358).abs() < 1e-3, "psi = {}", rp.psi);
    let rp = rate_pair(3.0, 0.0, 0.7).unwrap();
    assert_relative_eq!(rp.phi, 1.0, epsilon = 1e-15);
    assert_relative_eq!(rp.psi, 1.0, epsilon = 1e-15);
    assert!(rate_pair(-1.0, 0.0, 0.0).is_err());
}

#[test]
fn scheme_v_examples() {
    let u = UserParams::new(3, 0.3, 1000.0, 0.5).unwrap();
    let s = derive_scheme_v(&u, 1, 0.45).unwrap();
    assert_relative_eq!(s.theta(), 10.0 / 3.0, epsilon = 1e-12);
    assert_relative_eq!(s.gamma(), 2000.0, epsilon = 1e-9);
    assert_relative_eq!(s.mu(), 10.0 / 3.0, epsilon = 1e-12);

    let u = UserParams::new(2, 0.4, 7.0, 0.5).unwrap();
    let s = derive_scheme_v(&u, 1, 0.4).unwrap();
    assert_relative_eq!(s.theta(), 2.5, epsilon = 1e-12);
    assert_relative_eq!(s.gamma(), 14.0, epsilon = 1e-12);

    let u = UserParams::new(2, 0.3, 100.0, 0.5).unwrap();
    let s = derive_scheme_v(&u, 2, 0.42).unwrap();
    assert_relative_eq!(s.theta(), (0.6 / 0.42 - 1.0) / 0.3, epsilon = 1e-12);
    assert_relative_eq!(s.mu(), 1.0 / 0.6, epsilon = 1e-12);
    assert_relative_eq!(s.eta(), 1.0, epsilon = 1e-15);
    assert!(s.stability_ok());
    assert!(s.mu() > s.theta());
}

#[test]
fn scheme_v_rate_window() {
    let u = UserParams::new(2, 0.3, 100.0, 0.5).unwrap();
    // N = 2 needs R > 0.4.
    assert!(derive_scheme_v(&u, 2, 0.4).is_err());
    assert!(derive_scheme_v(&u, 2, 0.6).is_err());
    assert!(derive_scheme_v(&u, 1, 0.0).is_err());
    assert!(derive_scheme_v(&u, 1, 0.1).is_ok());
}

#[test]
fn limit_power_rate_plug_in() {
    let (q, r) = limit_power_rate_raw(1, 2.0, 1.0, 1.0, 0.8).unwrap();
    assert_relative_eq!(q, 1.0, epsilon = 1e-15);
    assert_relative_eq!(r, 0.4, epsilon = 1e-15);
    assert!(limit_power_rate_raw(1, 2.0, 0.5, 0.0, 0.8).is_err());
}

#[test]
fn limit_power_rate_matches_simulation() {
    let u = UserParams::new(3, 0.3, 1000.0, 0.5).unwrap();
    let s = derive_scheme_v(&u, 1, 0.45).unwrap();
    let (q, r) = power_rate_experiment(&u, 100_000, 1, s.theta(), s.gamma(), 8, 5).unwrap();
    assert!((q / 1000.0 - 1.0).abs() < 0.01, "power {q}");
    assert!((r / 0.45 - 1.0).abs() < 0.01, "rate {r}");
}

#[test]
fn stability_rules() {
    assert!(stability_ok_raw(1, 0.3, 100.0));
    assert!(!stability_ok_raw(2, 0.3, 2.0));
    assert!(stability_ok_raw(2, 0.3, 1.5));
    let u = UserParams::new(2, 0.3, 100.0, 0.5).unwrap();
    assert!(SchemeVI::new(&u, 2, 1.0, 1.0, 10.0).unwrap().stability_ok());
    assert!(SchemeVI::new(&u, 1, 1.0, 0.3, 10.0).unwrap().stability_ok());
}

#[test]
fn user_params_validation() {
    assert!(UserParams::new(0, 0.3, 1.0, 0.0).is_err());
    assert!(UserParams::new(1, 1.0, 1.0, 0.0).is_err());
    assert!(UserParams::new(1, 0.3, 0.0, 0.0).is_err());
    assert!(UserParams::new(1, 0.3, 1.0, -0.1).is_err());
    assert_relative_eq!(UserParams::new(3, 0.3, 1.0, 0.0).unwrap().lambda(), 0.9, epsilon = 1e-15);
}

proptest! {
    #[test]
    fn capacity_strictly_increasing(x in 0.0..1e6f64, dx in 1e-6..1e3f64) {
        prop_assert!(capacity_c(x).unwrap() < capacity_c(x + dx).unwrap());
    }

    #[test]
    fn rate_pair_monotone(g in 1e-3..1e3f64, go in 0.0..1e3f64, a in 0.0..4.0f64, d in 1e-3..10.0f64) {
        let base = rate_pair(g, go, a).unwrap();
        prop_assert!(base.psi <= base.phi);
        prop_assert!(rate_pair(g + d, go, a).unwrap().phi > base.phi);
        prop_assert!(rate_pair(g + d, go, a).unwrap().psi >= base.psi);
        prop_assert!(rate_pair(g, go + d, a).unwrap().psi <= base.psi);
        prop_assert!(rate_pair(g, go, a + d).unwrap().psi <= base.psi);
    }

    #[test]
    fn scheme_v_round_trip(k in 1u32..6, q in 0.05..0.95f64, p in 0.1..1e4f64, n in 1u32..5, t in 0.01..0.99f64) {
        let u = UserParams::new(k, q, p, 0.5).unwrap();
        let lam = u.lambda();
        let lo = if n > 1 { lam * n as f64 / (n as f64 + 1.0) } else { 0.0 };
        let r = lo + t * (lam - lo);
        let s = derive_scheme_v(&u, n, r).unwrap();
        let (qq, rr) = limit_power_rate(&s, &u).unwrap();
        prop_assert!((qq / p - 1.0).abs() < 1e-9);
        prop_assert!((rr / r - 1.0).abs() < 1e-9);
        prop_assert!((s.mu() - s.eta() / lam).abs() < 1e-12 * s.mu());
    }
}
