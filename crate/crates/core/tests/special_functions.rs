mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use reskit_core::special::*;

use common::{bisect, e_incomplete_by_quadrature, integrate, k_by_quadrature};

#[test]
fn k_matches_quadrature_at_symmetric_modulus() {
    let k = FRAC_1_SQRT_2;
    let oracle = k_by_quadrature(k);
    let value = complete_elliptic_k(k).unwrap();
    assert!(
        ((value - oracle) / oracle).abs() < 1e-14,
        "{value} vs {oracle}"
    );
}

#[test]
fn e_matches_quadrature_at_bifurcation_modulus() {
    let k = 0.759;
    let oracle = e_incomplete_by_quadrature(FRAC_PI_2, k);
    let value = complete_elliptic_e(k).unwrap();
    assert!(
        ((value - oracle) / oracle).abs() < 1e-14,
        "{value} vs {oracle}"
    );
}

#[test]
fn legendre_relation_on_modulus_grid() {
    for i in 0..100 {
        let k = 0.01 + 0.98 * i as f64 / 99.0;
        let kp = complementary_modulus(k);
        let (kk, ek) = complete_elliptic_ke(k).unwrap();
        let (kkp, ekp) = complete_elliptic_ke(kp).unwrap();
        assert_abs_diff_eq!(ek * kkp + ekp * kk - kk * kkp, FRAC_PI_2, epsilon = 1e-12);
    }
}

#[test]
fn nome_duality() {
    for &k in &[0.05, 0.3, 0.5, 0.759, 0.95] {
        let kp = complementary_modulus(k);
        let prod = nome(k).unwrap().value().ln() * nome(kp).unwrap().value().ln();
        assert_abs_diff_eq!(prod, PI * PI, epsilon = 1e-10);
    }
}

#[test]
fn nome_composition_oracle() {
    let k = 0.759;
    let oracle = (-PI * k_by_quadrature(complementary_modulus(k)) / k_by_quadrature(k)).exp();
    assert_abs_diff_eq!(nome(k).unwrap().value(), oracle, epsilon = 1e-14);
    assert!(nome(1e-8).unwrap().value() < 1e-16);
}

#[test]
fn nome_increases_with_modulus() {
    let mut last = 0.0;
    for i in 1..200 {
        let a = nome(i as f64 / 200.0).unwrap().value();
        assert!(a > last);
        last = a;
    }
}

#[test]
fn jacobi_identities_on_period_grid() {
    for &k in &[0.05, 0.3, 0.5, 0.759, 0.9, 0.99] {
        let st = JacobiState::new(k).unwrap();
        let big_k = st.quarter_period();
        for i in 0..=400 {
            let u = -4.0 * big_k + 8.0 * big_k * i as f64 / 400.0;
            let (sn, cn, dn) = st.sn_cn_dn(u);
            assert_abs_diff_eq!(sn * sn + cn * cn, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dn * dn + k * k * sn * sn, 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn sn_inverts_first_kind_integral() {
    // sn(F(φ, k), k) = sin φ with F from quadrature
    for &k in &[0.3, 0.759] {
        for &phi in &[0.2, 1.0, 1.4] {
            let u = integrate(
                &|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(),
                0.0,
                phi,
                1e-15,
            );
            let (sn, cn, _) = jacobi_sn_cn_dn(u, k).unwrap();
            assert_abs_diff_eq!(sn, phi.sin(), epsilon = 1e-13);
            assert_abs_diff_eq!(cn, phi.cos(), epsilon = 1e-13);
        }
    }
}

#[test]
fn zeta_matches_incomplete_e_quadrature() {
    let k = 0.759;
    let big_k = k_by_quadrature(k);
    let big_e = e_incomplete_by_quadrature(FRAC_PI_2, k);
    let u = 0.5 * big_k;
    // amplitude φ with F(φ, k) = u, solved on the quadrature oracle
    let f = |phi: f64| {
        integrate(
            &|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(),
            0.0,
            phi,
            1e-15,
        ) - u
    };
    let phi = bisect(&f, 0.0, FRAC_PI_2);
    let oracle = e_incomplete_by_quadrature(phi, k) - u * big_e / big_k;
    assert_abs_diff_eq!(jacobi_zeta(u, k).unwrap(), oracle, epsilon = 1e-12);
}

fn direct_kernels(k: f64, theta: f64) -> (f64, f64) {
    let st = JacobiState::new(k).unwrap();
    let big_k = st.quarter_period();
    let (sn, cn, _) = st.sn_cn_dn(2.0 * big_k * theta / PI);
    (2.0 * (k * sn).asin(), 4.0 * k * big_k / PI * cn)
}

#[test]
fn fourier_series_match_direct_cn() {
    for &k in &[0.3, 0.5, 0.759] {
        for i in 0..32 {
            let theta = 2.0 * PI * i as f64 / 32.0;
            let (_, cn_direct) = direct_kernels(k, theta);
            let series = fourier_cn_series(k, theta, Truncation::Adaptive).unwrap();
            assert_abs_diff_eq!(series, cn_direct, epsilon = 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn jacobi_identities_hold(k in 0.0f64..0.999, u in -50.0f64..50.0) {
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, k).unwrap();
        prop_assert!((sn * sn + cn * cn - 1.0).abs() < 1e-12);
        prop_assert!((dn * dn + k * k * sn * sn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_is_odd_and_2k_periodic(k in 0.01f64..0.99, u in -5.0f64..5.0) {
        let st = JacobiState::new(k).unwrap();
        let z = st.zeta(u);
        prop_assert!((z + st.zeta(-u)).abs() < 1e-13);
        prop_assert!((z - st.zeta(u + 2.0 * st.quarter_period())).abs() < 1e-12);
    }
}
