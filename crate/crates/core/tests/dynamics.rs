mod common;

use approx::assert_abs_diff_eq;
use common::rk4;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reskit_core::averaging::{Harmonic, HarmonicCoefficients, ResonanceCoefficients, Stability};
use reskit_core::dynamics::{
    classify_portrait, find_equilibria, find_limit_cycles, fundamental_equilibria, melnikov_delta1,
    sample_path, separatrix_gap, AveragedModel, CycleLocation, EquilibriumKind, FigureTag,
    ModelForm, Passability, PortraitOptions,
};
use reskit_core::pendulum::{
    pendulum_coefficients, pendulum_resonance_setup, PendulumCoefficients, PendulumParams,
};
use reskit_core::Error;

fn params(p2: f64, p3: f64, epsilon: f64) -> PendulumParams {
    let setup = pendulum_resonance_setup(1.0).unwrap();
    PendulumParams {
        p1: setup.p1,
        p2,
        p3,
        omega1: 1.0,
        omega2: setup.omega2,
        epsilon,
    }
}

fn coefficients(p2: f64, p3: f64, epsilon: f64) -> ResonanceCoefficients {
    params(p2, p3, epsilon).resonance_coefficients().unwrap()
}

fn model(c: ResonanceCoefficients, form: ModelForm) -> AveragedModel {
    AveragedModel::new(c, form).unwrap()
}

/// The averaged field written out term by term from the harmonic amplitudes.
struct FieldOracle {
    pc: PendulumCoefficients,
    p2: f64,
    p3: f64,
    mu: f64,
    b2_total: f64,
    gamma: (f64, f64),
}

impl FieldOracle {
    fn parts(&self, v: f64) -> [f64; 8] {
        let (s, c) = (3.0 * v).sin_cos();
        let pc = &self.pc;
        let (p2, p3) = (self.p2, self.p3);
        let a = p3 * pc.a1_tilde * s + p2 * pc.a2_tilde * c;
        let p0 = p3 * pc.p01_tilde * s + p2 * pc.p02_tilde * c;
        let q0 = p3 * pc.q01 * c + p2 * pc.q02 * s;
        let dq0 = 3.0 * (-p3 * pc.q01 * s + p2 * pc.q02 * c);
        let p1 = p3 * pc.p11_tilde * s + p2 * pc.p12_tilde * c;
        let q1 = p3 * pc.q11 * c + p2 * pc.q12 * s;
        let dq1 = 3.0 * (-p3 * pc.q11 * s + p2 * pc.q12 * c);
        let sigma = p0 + dq0;
        [a, p0, q0, dq0, p1, q1, dq1, sigma]
    }

    fn symmetric(&self, v: f64, u: f64) -> [f64; 2] {
        let [a, p0, q0, _, p1, q1, dq1, sigma] = self.parts(v);
        let f = self.pc.frequency;
        let (b1, b2, b3, mu) = (f.b1, f.b2, f.b3, self.mu);
        let m = (p1 + dq1 + b2 / b1 * (p0 + sigma) + 3.0 * b3 / b1 * a) / b1 + self.b2_total / b1;
        let n = -p0 * q0 + (q1 - 2.0 * b2 / b1 * q0) * a;
        [
            b1 * u,
            a + mu * sigma * u + mu * mu / b1 * (m * b1 * b1 * u * u + n),
        ]
    }

    fn full(&self, v: f64, u: f64) -> [f64; 2] {
        let [a, p0, q0, dq0, p1, q1, _, sigma] = self.parts(v);
        let f = self.pc.frequency;
        let (b1, b2, b3, mu) = (f.b1, f.b2, f.b3, self.mu);
        let b0e = self.pc.b0 + mu * self.gamma.0;
        let b1e = self.pc.b1 + mu * self.gamma.1;
        let du = a
            + b0e
            + mu * (sigma + b1e) * u
            + mu * mu * ((p1 + self.b2_total + b2 / b1 * dq0) * u * u - p0 * q0 / b1);
        let dv =
            b1 * u + mu * b2 * u * u + mu * mu * (b3 * u.powi(3) + (q1 - 2.0 * b2 / b1 * q0) * u);
        [dv, du]
    }
}

fn oracle(p2: f64, p3: f64, epsilon: f64, gamma: (f64, f64)) -> FieldOracle {
    let pr = params(p2, p3, epsilon);
    let k = pr.resonant_modulus().unwrap();
    let pc = pendulum_coefficients(k, pr.p1).unwrap();
    FieldOracle {
        pc,
        p2,
        p3,
        mu: epsilon.sqrt(),
        b2_total: pc.b2,
        gamma,
    }
}

#[test]
fn averaged_field_matches_term_by_term_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(p2, p3, eps, gamma) in &[
        (1.0, 1.0, 0.01, (0.0, 0.0)),
        (0.7, 2.0, 0.0025, (0.3, -0.8)),
    ] {
        let o = oracle(p2, p3, eps, gamma);
        let c = coefficients(p2, p3, eps);
        let full = model(c.clone().with_detuning(gamma.0, gamma.1), ModelForm::Full);
        let sym = (gamma == (0.0, 0.0)).then(|| model(c, ModelForm::Symmetric));
        for _ in 0..20 {
            let (v, u) = (rng.gen_range(0.0..6.3), rng.gen_range(-2.0..2.0));
            let got = full.field(&[v, u]);
            let want = o.full(v, u);
            for i in 0..2 {
                assert_abs_diff_eq!(got[i], want[i], epsilon = 1e-8 * (1.0 + want[i].abs()));
            }
            if let Some(sym) = &sym {
                let got = sym.field(&[v, u]);
                let want = o.symmetric(v, u);
                for i in 0..2 {
                    assert_abs_diff_eq!(got[i], want[i], epsilon = 1e-8 * (1.0 + want[i].abs()));
                }
            }
        }
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let m = model(
        coefficients(1.0, 1.0, 0.01).with_detuning(0.2, 0.4),
        ModelForm::Full,
    );
    let h = 1e-6;
    for &(v, u) in &[(0.3, 0.5), (1.7, -1.1), (4.0, 0.0)] {
        let j = m.jacobian(&[v, u]);
        for col in 0..2 {
            let mut a = [v, u];
            let mut b = [v, u];
            a[col] += h;
            b[col] -= h;
            let (fa, fb) = (m.field(&a), m.field(&b));
            for row in 0..2 {
                assert_abs_diff_eq!(j[row][col], (fa[row] - fb[row]) / (2.0 * h), epsilon = 1e-7);
            }
        }
    }
}

#[test]
fn unperturbed_truncation_equilibria_follow_sign_rule() {
    for &(p2, p3) in &[(0.0, 1.0), (1.0, 1.0), (2.5, 0.4)] {
        let m = model(
            coefficients(p2, p3, 0.01).with_epsilon(0.0),
            ModelForm::Full,
        );
        let eqs = find_equilibria(&m);
        assert_eq!(eqs.len(), 6, "two rest points per cell, three cells");
        let a = &m.coeffs.a_tilde;
        for e in &eqs {
            assert_abs_diff_eq!(e.u, 0.0, epsilon = 1e-10);
            let slope = m.b1() * a.eval_with_derivative(e.v).1;
            if slope > 0.0 {
                assert_eq!(e.kind, EquilibriumKind::Saddle);
            } else {
                assert_eq!(e.kind, EquilibriumKind::Center);
            }
        }
        assert!(find_limit_cycles(&m, &fundamental_equilibria(&m))
            .unwrap()
            .is_empty());
    }
}

#[test]
fn symmetric_form_requires_coincidence_and_zero_detuning() {
    let c = coefficients(0.0, 1.0, 0.01);
    assert!(matches!(
        AveragedModel::new(c.clone().with_detuning(0.1, 0.0), ModelForm::Symmetric),
        Err(Error::Precondition(_))
    ));
    let off = PendulumParams {
        p1: -8.3,
        ..params(0.0, 1.0, 0.01)
    };
    let c = off.resonance_coefficients().unwrap();
    assert!(matches!(
        AveragedModel::new(c, ModelForm::Symmetric),
        Err(Error::Precondition(_))
    ));
}

fn reversible() -> AveragedModel {
    model(coefficients(0.0, 1.0, 0.01), ModelForm::Symmetric)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversible_flow_under_time_reversal(v0 in 0.0f64..2.1, u0 in -0.6f64..0.6, t in 0.5f64..6.0) {
        let m = reversible();
        let f = |y: &[f64; 2]| m.field(y);
        let fwd = rk4(&f, [v0, u0], t, 4000);
        let back = rk4(&f, [v0, -u0], -t, 4000);
        prop_assert!((fwd[0] - back[0]).abs() < 1e-9);
        prop_assert!((fwd[1] + back[1]).abs() < 1e-9);
    }

    #[test]
    fn field_is_periodic_in_phase(v in -5.0f64..5.0, u in -2.0f64..2.0) {
        let m = model(coefficients(1.0, 1.0, 0.01).with_detuning(0.2, -0.3), ModelForm::Full);
        let a = m.field(&[v, u]);
        let b = m.field(&[v + m.period(), u]);
        prop_assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }
}

#[test]
fn adaptive_flow_agrees_with_fixed_step_oracle() {
    let m = model(coefficients(1.0, 1.0, 0.01), ModelForm::Symmetric);
    let (path, escaped) = sample_path(&m, [0.4, 0.3], 20.0, 5.0, 1e3).unwrap();
    assert!(!escaped);
    let last = path.last().unwrap();
    assert_abs_diff_eq!(last[0], 20.0);
    let want = rk4(&|y: &[f64; 2]| m.field(y), [0.4, 0.3], 20.0, 20000);
    assert_abs_diff_eq!(last[1], want[0], epsilon = 1e-8);
    assert_abs_diff_eq!(last[2], want[1], epsilon = 1e-8);
}

fn synthetic(epsilon: f64) -> HarmonicCoefficients {
    HarmonicCoefficients {
        order: 2,
        action: 1.0,
        omega: 1.0,
        b1: -0.5,
        b2: 0.1,
        b3: 0.05,
        a_tilde: Harmonic::new(0.1, 0.3),
        p0_tilde: Harmonic::new(0.4, -0.2),
        q0: Harmonic::new(0.02, 0.03),
        p1_tilde: Harmonic::new(0.05, 0.1),
        q1: Harmonic::new(-0.04, 0.02),
        gen_b0: 0.0,
        gen_b1: 0.0,
        gen_b2: 0.1,
        epsilon,
        gamma1: 0.0,
        gamma2: 0.0,
    }
}

#[test]
fn energy_drift_scales_linearly_in_mu() {
    let mut rates = Vec::new();
    for mu in [0.02f64, 0.05, 0.1] {
        let m = model(
            synthetic(mu * mu).coefficients().unwrap(),
            ModelForm::Symmetric,
        );
        let v_pot = m.potential().clone();
        let b1 = m.b1();
        let energy = |v: f64, u: f64| 0.5 * b1 * u * u - v_pot.eval(v);
        let start = [0.2, 0.4 * m.amplitude()];
        let (path, _) = sample_path(&m, start, 20.0, 0.05, 1e3).unwrap();
        let h0 = energy(start[0], start[1]);
        let drift = path
            .iter()
            .map(|p| (energy(p[1], p[2]) - h0).abs())
            .fold(0.0, f64::max)
            / 20.0;
        rates.push(drift / mu);
    }
    let (lo, hi) = rates
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    assert!(hi / lo < 1.5, "drift per unit mu {rates:?}");
}

#[test]
fn splitting_sign_matches_shooting_on_pendulum() {
    let natural = coefficients(0.0, 1.0, 0.0025);
    for b2 in [natural.b2_val, 0.5, -0.5, -natural.b2_val] {
        let m = model(natural.clone().with_b2(b2), ModelForm::Symmetric);
        let d = melnikov_delta1(&m).unwrap().delta1;
        for upper in [true, false] {
            let g = separatrix_gap(&m, upper).unwrap().gap;
            assert_eq!(d.signum(), g.signum(), "B2 = {b2}: delta1 {d}, gap {g}");
        }
    }
}

#[test]
fn splitting_vanishes_without_corrections() {
    let c = coefficients(0.0, 1.0, 0.01).with_b2(0.0);
    let m = model(c, ModelForm::Symmetric);
    let r = melnikov_delta1(&m).unwrap();
    assert!(r.delta1.abs() < 1e-12);
    let alternating = model(coefficients(1.0, 1.0, 0.01), ModelForm::Symmetric);
    assert!(matches!(
        melnikov_delta1(&alternating),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn rotational_cycles_close_under_oracle_flow() {
    // constant-sign divergence with detunings: one cycle per half-cylinder
    let m = model(
        coefficients(0.0, 1.0, 0.01).with_detuning(0.15, -1.0),
        ModelForm::Full,
    );
    let eqs = fundamental_equilibria(&m);
    let cycles = find_limit_cycles(&m, &eqs).unwrap();
    let upper: Vec<_> = cycles
        .iter()
        .filter(|c| c.location == CycleLocation::Upper)
        .collect();
    let lower: Vec<_> = cycles
        .iter()
        .filter(|c| c.location == CycleLocation::Lower)
        .collect();
    assert_eq!((upper.len(), lower.len()), (1, 1));
    assert_ne!(upper[0].stability, lower[0].stability);
    for c in &cycles {
        let end = rk4(&|y: &[f64; 2]| m.field(y), c.anchor, c.period, 40000);
        assert_abs_diff_eq!(end[0].abs(), m.period(), epsilon = 1e-7);
        assert_abs_diff_eq!(end[1], c.anchor[1], epsilon = 1e-7);
        let expected = if c.multiplier.abs() < 1.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        assert_eq!(c.stability, expected);
    }
}

#[test]
fn oscillatory_cycle_surrounds_focus() {
    let m = model(
        coefficients(1.0, 1.0, 0.01).with_detuning(0.0, -0.02),
        ModelForm::Full,
    );
    let eqs = fundamental_equilibria(&m);
    let focus = eqs
        .iter()
        .find(|e| e.kind == EquilibriumKind::StableFocus)
        .expect("stable focus");
    let cycles = find_limit_cycles(&m, &eqs).unwrap();
    let osc: Vec<_> = cycles
        .iter()
        .filter(|c| c.location == CycleLocation::Oscillatory)
        .collect();
    assert_eq!(osc.len(), 1);
    let c = osc[0];
    assert_eq!(c.stability, Stability::Unstable);
    assert_abs_diff_eq!(c.anchor[0], focus.v, epsilon = 1e-12);
    let end = rk4(&|y: &[f64; 2]| m.field(y), c.anchor, c.period, 40000);
    assert_abs_diff_eq!(end[0], c.anchor[0], epsilon = 1e-7);
    assert_abs_diff_eq!(end[1], c.anchor[1], epsilon = 1e-7);
    // winding: the curve encloses the focus
    let wind: f64 = c
        .points
        .windows(2)
        .map(|w| {
            let a = (w[0][1] - focus.u).atan2(w[0][0] - focus.v);
            let b = (w[1][1] - focus.u).atan2(w[1][0] - focus.v);
            let mut d = b - a;
            if d > std::f64::consts::PI {
                d -= std::f64::consts::TAU;
            } else if d < -std::f64::consts::PI {
                d += std::f64::consts::TAU;
            }
            d
        })
        .sum();
    assert_abs_diff_eq!(wind.abs(), std::f64::consts::TAU, epsilon = 1e-6);
}

#[test]
fn reversible_portraits_follow_splitting_sign() {
    let natural = coefficients(0.0, 1.0, 0.01);
    let opts = PortraitOptions::default();
    let cases = [
        (
            natural.b2_val,
            FigureTag::Fig1a,
            Passability::PartlyPassable,
        ),
        (0.0, FigureTag::Fig1b, Passability::Impassable),
        (
            -natural.b2_val,
            FigureTag::Fig1c,
            Passability::PartlyPassable,
        ),
    ];
    for (b2, tag, pass) in cases {
        let p = classify_portrait(
            &model(natural.clone().with_b2(b2), ModelForm::Symmetric),
            &opts,
        )
        .unwrap();
        assert_eq!(p.taxonomy.figure, Some(tag));
        assert_eq!(p.taxonomy.passability, pass);
        assert_eq!(p.equilibria.len(), 6);
        assert!(p.limit_cycles.is_empty());
        assert_eq!(p.separatrices.len(), 4);
    }
}

#[test]
fn passable_without_rest_points() {
    let m = model(
        coefficients(0.0, 1.0, 0.01).with_detuning(1.0, 0.0),
        ModelForm::Full,
    );
    let p = classify_portrait(
        &m,
        &PortraitOptions {
            grid: 6,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(p.equilibria.is_empty());
    assert_eq!(p.taxonomy.passability, Passability::Passable);
    assert_eq!(p.taxonomy.figure, None);
}

/// Random reversible harmonic model; the draw is rejected when the splitting
/// integral is small against the size of its integrand, where the `O(μ)`
/// corrections of the measured gap could flip its sign.
fn random_reversible(rng: &mut ChaCha8Rng, epsilon: f64) -> Option<AveragedModel> {
    let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let sign = if u(-1.0, 1.0) < 0.0 { -1.0 } else { 1.0 };
    let draw = HarmonicCoefficients {
        order: [1, 2, 3][u(0.0, 3.0) as usize],
        action: 1.0,
        omega: 1.0,
        b1: sign * u(0.2, 1.0),
        b2: u(-0.5, 0.5),
        b3: u(-0.5, 0.5),
        a_tilde: Harmonic::new(u(-0.4, 0.4), u(-0.4, 0.4)),
        p0_tilde: Harmonic::default(),
        q0: Harmonic::new(u(-0.3, 0.3), u(-0.3, 0.3)),
        p1_tilde: Harmonic::new(u(-0.3, 0.3), u(-0.3, 0.3)),
        q1: Harmonic::new(u(-0.3, 0.3), u(-0.3, 0.3)),
        gen_b0: 0.0,
        gen_b1: 0.0,
        gen_b2: u(-2.0, 2.0),
        epsilon,
        gamma1: 0.0,
        gamma2: 0.0,
    }
    .divergence_free();
    let m = AveragedModel::new(draw.coefficients().ok()?, ModelForm::Symmetric).ok()?;
    let r = melnikov_delta1(&m).ok()?;
    let (mm, nn) = m.reduced_coefficients();
    let b1 = m.b1();
    let pot = m.potential();
    let scale = (0..512)
        .map(|j| {
            let w = m.period() * j as f64 / 512.0;
            let v = w + r.saddle_v0;
            (2.0 * b1 * mm.eval(v) * (pot.eval(v) - pot.eval(r.saddle_v0))).abs() + nn.eval(v).abs()
        })
        .sum::<f64>()
        * m.period()
        / 512.0
        / b1.abs();
    (r.delta1.abs() > 0.1 * scale && m.amplitude() > 0.1).then_some(m)
}

#[test]
fn splitting_sign_matches_shooting_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut accepted = 0;
    while accepted < 5 {
        let Some(m) = random_reversible(&mut rng, 0.0025) else {
            continue;
        };
        accepted += 1;
        let d = melnikov_delta1(&m).unwrap().delta1;
        for upper in [true, false] {
            let g = separatrix_gap(&m, upper).unwrap().gap;
            assert_eq!(d.signum(), g.signum(), "delta1 {d}, gap {g}");
        }
    }
}
