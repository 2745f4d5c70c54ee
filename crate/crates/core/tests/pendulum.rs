mod common;

use std::f64::consts::{PI, TAU};

use approx::assert_abs_diff_eq;
use common::{derivative, orbit_mean, second_derivative, third_derivative};
use reskit_core::averaging::{
    find_simple_roots, generating_function, resonance_coefficients, CoefficientOptions,
    GeneratingFunction, ROOT_SCAN_GRID,
};
use reskit_core::hamiltonian::{
    action_to_k, canonicity_defect, k_to_action, ActionAngleChart, Hamiltonian,
};
use reskit_core::pendulum::{
    frequency_jet_at, nome_amplitudes, pendulum_b0, pendulum_b1_b2, pendulum_chart,
    pendulum_coefficients, pendulum_resonance_setup, PendulumEnergy, PendulumGeneratingFunction,
    PendulumParams,
};
use reskit_core::special::{complete_elliptic_k, JacobiState};

const MODULI: [f64; 3] = [0.3, 0.5, 0.759];

/// Direct elliptic-function evaluation of `(x, y)` on the level with action `i`.
fn direct_xy(i: f64, theta: f64) -> (f64, f64) {
    let k = action_to_k(i).unwrap();
    let st = JacobiState::new(k).unwrap();
    let (sn, cn, _) = st.sn_cn_dn(2.0 * st.quarter_period() * theta / PI);
    (2.0 * (k * sn).asin(), 2.0 * k * cn)
}

fn direct_omega(i: f64) -> f64 {
    PI / (2.0 * common::k_by_quadrature(action_to_k(i).unwrap()))
}

#[test]
fn chart_stays_on_its_energy_level() {
    let chart = pendulum_chart();
    for &k in &MODULI {
        let level = chart.level(k_to_action(k).unwrap()).unwrap();
        for j in 0..64 {
            let p = level.point(TAU * j as f64 / 64.0);
            let h = PendulumEnergy.energy(p.x.re, p.y.re);
            assert_abs_diff_eq!(h, 2.0 * k * k - 1.0, epsilon = 1e-10);
        }
    }
}

#[test]
fn kernels_match_direct_elliptic_functions() {
    let chart = pendulum_chart();
    for &k in &MODULI {
        let i = k_to_action(k).unwrap();
        let level = chart.level(i).unwrap();
        for j in 0..32 {
            let theta = TAU * j as f64 / 32.0 + 0.01;
            let p = level.point(theta);
            let (x, y) = direct_xy(i, theta);
            assert_abs_diff_eq!(p.x.re, x, epsilon = 1e-12);
            assert_abs_diff_eq!(p.y.re, y, epsilon = 1e-12);
        }
    }
}

#[test]
fn kernel_action_derivatives_match_finite_differences() {
    let chart = pendulum_chart();
    for &k in &MODULI {
        let i = k_to_action(k).unwrap();
        let level = chart.level(i).unwrap();
        for &theta in &[0.2, 1.1, 2.9, 4.0] {
            let p = level.point(theta);
            let x = |s: f64| direct_xy(s, theta).0;
            let xt = |s: f64| direct_xy(s, theta).1 / direct_omega(s);
            let h = 1e-3;
            assert_abs_diff_eq!(p.x.v1, derivative(&x, i, h), epsilon = 1e-8);
            assert_abs_diff_eq!(p.x.v2, second_derivative(&x, i, h), epsilon = 1e-7);
            assert_abs_diff_eq!(p.x_theta.v1, derivative(&xt, i, h), epsilon = 1e-8);
            assert_abs_diff_eq!(p.x_theta.v2, second_derivative(&xt, i, h), epsilon = 1e-7);
        }
    }
}

#[test]
fn chart_is_canonical_and_invertible() {
    let chart = pendulum_chart();
    let actions: Vec<f64> = MODULI.iter().map(|&k| k_to_action(k).unwrap()).collect();
    assert!(canonicity_defect(&chart, &actions, 32).unwrap() < 1e-10);
    for &i in &actions {
        for &theta in &[0.0, 0.7, 2.0, 3.5, 5.9] {
            let p = chart.point(i, theta).unwrap();
            let (ii, tt) = chart.invert(p.x.re, p.y.re).unwrap();
            assert_abs_diff_eq!(ii, i, epsilon = 1e-12);
            let d = (tt - theta).rem_euclid(TAU);
            assert!(d.min(TAU - d) < 1e-10, "angle {tt} vs {theta}");
        }
    }
}

#[test]
fn frequency_coefficients_match_differences_of_the_frequency() {
    for &k in &[0.3, 0.5, 0.759, 0.9] {
        let i = k_to_action(k).unwrap();
        let jet = frequency_jet_at(k).unwrap();
        let h = 2e-3;
        assert_abs_diff_eq!(jet.omega, direct_omega(i), epsilon = 1e-13);
        assert_abs_diff_eq!(jet.b1, derivative(&direct_omega, i, h), epsilon = 1e-8);
        assert_abs_diff_eq!(
            jet.b2,
            0.5 * second_derivative(&direct_omega, i, h),
            epsilon = 1e-7
        );
        assert_abs_diff_eq!(
            jet.b3,
            third_derivative(&direct_omega, i, 1e-2) / 6.0,
            epsilon = 1e-6
        );
    }
}

/// `B₀` oracle: `(1/2π)∫(−1 + p₁ cos 3x) y x_θ dθ` with direct elliptic functions.
fn b0_oracle(i: f64, p1: f64) -> f64 {
    let w = direct_omega(i);
    orbit_mean(
        &|t: f64| {
            let (x, y) = direct_xy(i, t);
            (-1.0 + p1 * (3.0 * x).cos()) * y * y / w
        },
        512,
    )
}

#[test]
fn generating_function_closed_form_matches_quadrature() {
    for &p1 in &[-8.481, 0.0, 2.5] {
        for &k in &MODULI {
            let i = k_to_action(k).unwrap();
            assert_abs_diff_eq!(
                pendulum_b0(k, p1).unwrap(),
                b0_oracle(i, p1),
                epsilon = 1e-10
            );
            let (b1, b2) = pendulum_b1_b2(k, p1).unwrap();
            let f = |s: f64| pendulum_b0(action_to_k(s).unwrap(), p1).unwrap();
            assert_abs_diff_eq!(b1, derivative(&f, i, 1e-3), epsilon = 1e-7);
            assert_abs_diff_eq!(b2, 0.5 * second_derivative(&f, i, 2e-3), epsilon = 1e-6);
        }
    }
}

#[test]
fn torus_quadrature_reproduces_generating_function() {
    let chart = pendulum_chart();
    let params = PendulumParams {
        p1: -8.481,
        p2: 1.0,
        p3: 1.0,
        omega1: 1.0,
        omega2: 1.448,
        epsilon: 1e-3,
    };
    let sys = params.system().unwrap();
    let gf = generating_function(&sys, &chart);
    for &k in &MODULI {
        let i = k_to_action(k).unwrap();
        let v = gf.values(i).unwrap();
        let (b1, b2) = pendulum_b1_b2(k, params.p1).unwrap();
        assert_abs_diff_eq!(v.b0, pendulum_b0(k, params.p1).unwrap(), epsilon = 1e-8);
        assert_abs_diff_eq!(v.b1, b1, epsilon = 1e-7);
        assert_abs_diff_eq!(v.b2, b2, epsilon = 1e-6);
    }
}

#[test]
fn small_modulus_limit_of_generating_function() {
    // B₀ ≈ (p₁ − 1) I with I ≈ 2k² near the bottom of the well
    for &p1 in &[-3.0, 0.5] {
        let k = 1e-3;
        let i = k_to_action(k).unwrap();
        let b0 = pendulum_b0(k, p1).unwrap();
        assert!((b0 / ((p1 - 1.0) * i) - 1.0).abs() < 1e-4, "{b0}");
    }
}

#[test]
fn simple_roots_split_and_vanish() {
    let two = find_simple_roots(&PendulumGeneratingFunction { p1: -9.0 }, ROOT_SCAN_GRID).unwrap();
    assert_eq!(two.len(), 2);
    let ks: Vec<f64> = two.iter().map(|r| action_to_k(r.action).unwrap()).collect();
    assert!(ks[0] < 0.759 && ks[1] > 0.759, "{ks:?}");
    assert_ne!(two[0].stability, two[1].stability);
    let none = find_simple_roots(&PendulumGeneratingFunction { p1: -8.0 }, ROOT_SCAN_GRID).unwrap();
    assert!(none.is_empty());
}

#[test]
fn headline_double_cycle_and_resonance() {
    let setup = pendulum_resonance_setup(1.0).unwrap();
    assert_abs_diff_eq!(setup.p1, -8.481, epsilon = 1e-3);
    assert_abs_diff_eq!(setup.k, 0.759, epsilon = 1e-3);
    assert_abs_diff_eq!(setup.omega2, 1.448, epsilon = 1e-3);
    let omega = PI / (2.0 * complete_elliptic_k(setup.k).unwrap());
    assert_abs_diff_eq!(omega, 0.816, epsilon = 1e-3);
    assert_abs_diff_eq!(3.0 * omega - 1.0 - setup.omega2, 0.0, epsilon = 1e-12);
    let (b1, b2) = pendulum_b1_b2(setup.k, setup.p1).unwrap();
    assert_abs_diff_eq!(b1, 0.0, epsilon = 1e-6);
    assert!(b2.abs() > 1e-3);
    let params = PendulumParams {
        p1: setup.p1,
        p2: 0.0,
        p3: 1.0,
        omega1: 1.0,
        omega2: setup.omega2,
        epsilon: 1e-3,
    };
    assert_abs_diff_eq!(params.resonant_modulus().unwrap(), setup.k, epsilon = 1e-10);
}

/// Harmonic amplitude `(1/π)∫ g(θ) trig(3θ) dθ` of an orbit function.
fn amplitude(g: &dyn Fn(f64) -> f64, sine: bool) -> f64 {
    2.0 * orbit_mean(
        &|t: f64| {
            g(t) * if sine {
                (3.0 * t).sin()
            } else {
                (3.0 * t).cos()
            }
        },
        512,
    )
}

#[test]
fn nome_closed_forms_match_direct_quadrature() {
    for &k in &MODULI {
        let i = k_to_action(k).unwrap();
        let nome = nome_amplitudes(k).unwrap();
        // p₃ drift: −¼ · cos-amplitude of x_θ
        let drift = |s: f64| -0.25 * amplitude(&|t| direct_xy(s, t).1 / direct_omega(s), false);
        let h = 1e-3;
        assert_abs_diff_eq!(nome.drift, drift(i), epsilon = 1e-10);
        assert_abs_diff_eq!(nome.drift_slope, derivative(&drift, i, h), epsilon = 1e-7);
        assert_abs_diff_eq!(
            nome.drift_curvature,
            0.5 * second_derivative(&drift, i, 2e-3),
            epsilon = 1e-6
        );
        // p₃ phase shift: −¼ · sin-amplitude of x_I
        let x_i = |t: f64| derivative(&|s| direct_xy(s, t).0, i, h);
        let q01 = -0.25 * amplitude(&x_i, true);
        assert_abs_diff_eq!(nome.drift_slope / 3.0, q01, epsilon = 1e-7);
        // p₂ divergence: ∂_I(¼ sin-amp of x y x_θ) + 3·(¼ cos-amp of x y x_I)
        let rate = |s: f64| {
            0.25 * amplitude(
                &|t| {
                    let (x, y) = direct_xy(s, t);
                    x * y * y / direct_omega(s)
                },
                true,
            )
        };
        let shift = 0.25
            * amplitude(
                &|t| {
                    let (x, y) = direct_xy(i, t);
                    x * y * x_i(t)
                },
                false,
            );
        assert_abs_diff_eq!(
            nome.divergence,
            derivative(&rate, i, h) + 3.0 * shift,
            epsilon = 1e-7
        );
    }
}

#[test]
fn pendulum_coefficient_relations() {
    let c = pendulum_coefficients(0.759, -8.481).unwrap();
    assert_eq!(c.q01, c.p01_tilde / 3.0);
    assert_eq!(c.q11, 2.0 * c.p11_tilde / 3.0);
    assert_abs_diff_eq!(c.p02_tilde + 3.0 * c.q02, c.sigma_tilde, epsilon = 1e-10);
    for k in (0..=85).map(|j| 0.1 + 0.01 * j as f64) {
        let c = pendulum_coefficients(k, -8.481).unwrap();
        let all = [
            c.a1_tilde,
            c.a2_tilde,
            c.sigma_tilde,
            c.p01_tilde,
            c.p02_tilde,
            c.p11_tilde,
            c.p12_tilde,
            c.q01,
            c.q02,
            c.q11,
            c.q12,
            c.b0,
            c.b1,
            c.b2,
            c.frequency.b1,
            c.frequency.b2,
            c.frequency.b3,
        ];
        assert!(all.iter().all(|v| v.is_finite()), "k = {k}");
    }
}

#[test]
fn closed_form_and_torus_quadrature_coefficients_agree() {
    let setup = pendulum_resonance_setup(1.0).unwrap();
    let params = PendulumParams {
        p1: setup.p1,
        p2: 0.7,
        p3: 1.3,
        omega1: 1.0,
        omega2: setup.omega2,
        epsilon: 1e-3,
    };
    let closed = params.resonance_coefficients().unwrap();
    let sys = params.system().unwrap();
    let chart = pendulum_chart();
    let generic = resonance_coefficients(
        &sys,
        &chart,
        closed.index,
        closed.action,
        CoefficientOptions::default(),
    )
    .unwrap();
    assert_abs_diff_eq!(generic.b0_val, closed.b0_val, epsilon = 1e-8);
    assert_abs_diff_eq!(generic.b1_val, closed.b1_val, epsilon = 1e-8);
    assert_abs_diff_eq!(generic.b2_val, closed.b2_val, epsilon = 1e-7);
    for j in 0..20 {
        let v = 0.37 * j as f64;
        let pairs = [
            (&generic.a_tilde, &closed.a_tilde),
            (&generic.p0_tilde, &closed.p0_tilde),
            (&generic.q0, &closed.q0),
            (&generic.p1_tilde, &closed.p1_tilde),
            (&generic.q1, &closed.q1),
            (&generic.sigma_tilde, &closed.sigma_tilde),
        ];
        for (idx, (g, c)) in pairs.iter().enumerate() {
            assert_abs_diff_eq!(g.eval(v), c.eval(v), epsilon = 1e-8);
            let _ = idx;
        }
    }
}
