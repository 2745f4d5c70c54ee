use std::f64::consts::TAU;

use num_dual::Dual64;
use serde::Serialize;

use crate::averaging::{PeriodicFn, ResonanceCoefficients, ResonanceIndex};
use crate::error::{Error, Result};
use crate::hamiltonian::{k_to_action, ChartLevel, FrequencyJet};

use super::chart::{PendulumChart, PendulumLevel};
use super::closed_form::{frequency_jet_at, nome_amplitudes, pendulum_b0, pendulum_b1_b2};
use super::PendulumParams;

/// Harmonic amplitudes of the averaged pendulum system on one level. Each
/// coefficient function is `p₃·(first) + p₂·(second)` in `sin 3v`/`cos 3v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PendulumCoefficients {
    pub k: f64,
    pub a1_tilde: f64,
    pub a2_tilde: f64,
    pub sigma_tilde: f64,
    pub p01_tilde: f64,
    pub p02_tilde: f64,
    pub p11_tilde: f64,
    pub p12_tilde: f64,
    pub q01: f64,
    pub q02: f64,
    pub q11: f64,
    pub q12: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub frequency: FrequencyJet,
}

/// Amplitudes of the `p₂`-forced harmonics, obtained by quadrature over one
/// orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTermIntegrals {
    pub a2_tilde: f64,
    pub p02_tilde: f64,
    pub p12_tilde: f64,
    pub q02: f64,
    pub q12: f64,
}

const CROSS_START_NODES: usize = 1024;
const CROSS_MAX_NODES: usize = 16384;
const CROSS_TOL: f64 = 1e-13;

fn cross_terms_at(level: &PendulumLevel, nodes: usize) -> [f64; 5] {
    let mut acc = [0.0; 5];
    for j in 0..nodes {
        let theta = TAU * j as f64 / nodes as f64;
        let pt = level.point(theta);
        let (s3, c3) = (3.0 * theta).sin_cos();
        let rate = pt.x * pt.y * pt.x_theta;
        let lower = |j: crate::hamiltonian::Jet| Dual64::new(j.re, j.v1);
        let shift = lower(pt.x) * lower(pt.y) * Dual64::new(pt.x.v1, pt.x.v2);
        acc[0] += rate.re * s3;
        acc[1] += rate.v1 * s3;
        acc[2] += rate.v2 * s3;
        acc[3] += shift.re * c3;
        acc[4] += shift.eps * c3;
    }
    // (1/4π)∫ = (1/2)·mean, and (1/8π)∫ for the curvature term
    let w = 0.5 / nodes as f64;
    [
        acc[0] * w,
        acc[1] * w,
        0.5 * acc[2] * w,
        acc[3] * w,
        acc[4] * w,
    ]
}

/// Periodic trapezoid evaluation of the five `p₂` amplitudes, doubling from
/// 1024 nodes until the change is below `1e-13`.
pub fn cross_term_integrals(k: f64) -> Result<CrossTermIntegrals> {
    let level = PendulumChart::default().level_at_modulus(k)?;
    let mut nodes = CROSS_START_NODES;
    let mut prev = cross_terms_at(&level, nodes);
    loop {
        if nodes >= CROSS_MAX_NODES {
            return Err(Error::NonConvergence("pendulum cross-term quadrature"));
        }
        nodes *= 2;
        let next = cross_terms_at(&level, nodes);
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change < CROSS_TOL {
            let [a2_tilde, p02_tilde, p12_tilde, q02, q12] = next;
            return Ok(CrossTermIntegrals {
                a2_tilde,
                p02_tilde,
                p12_tilde,
                q02,
                q12,
            });
        }
        prev = next;
    }
}

/// All harmonic amplitudes and scalars of the averaged pendulum system on the
/// level `k`, with the generating function evaluated at `p1`.
pub fn pendulum_coefficients(k: f64, p1: f64) -> Result<PendulumCoefficients> {
    let nome = nome_amplitudes(k)?;
    let cross = cross_term_integrals(k)?;
    let (b1, b2) = pendulum_b1_b2(k, p1)?;
    Ok(PendulumCoefficients {
        k,
        a1_tilde: nome.drift,
        a2_tilde: cross.a2_tilde,
        sigma_tilde: nome.divergence,
        p01_tilde: nome.drift_slope,
        p02_tilde: cross.p02_tilde,
        p11_tilde: nome.drift_curvature,
        p12_tilde: cross.p12_tilde,
        q01: nome.drift_slope / 3.0,
        q02: cross.q02,
        q11: 2.0 * nome.drift_curvature / 3.0,
        q12: cross.q12,
        b0: pendulum_b0(k, p1)?,
        b1,
        b2,
        frequency: frequency_jet_at(k)?,
    })
}

/// The pendulum resonance index `3ω = ω₁ + ω₂`.
pub const PENDULUM_INDEX: ResonanceIndex = ResonanceIndex { n: 3, m1: 1, m2: 1 };

impl PendulumCoefficients {
    /// Assembles the coefficient functions of the averaged system from the
    /// harmonic amplitudes.
    pub fn assemble(&self, params: &PendulumParams) -> Result<ResonanceCoefficients> {
        let (p2, p3) = (params.p2, params.p3);
        let h = |c: f64, s: f64| PeriodicFn::first_harmonic(3, c, s);
        Ok(ResonanceCoefficients {
            index: PENDULUM_INDEX,
            action: k_to_action(self.k)?,
            a_tilde: h(p2 * self.a2_tilde, p3 * self.a1_tilde),
            p0_tilde: h(p2 * self.p02_tilde, p3 * self.p01_tilde),
            q0: h(p3 * self.q01, p2 * self.q02),
            p1_tilde: h(p2 * self.p12_tilde, p3 * self.p11_tilde),
            q1: h(p3 * self.q11, p2 * self.q12),
            sigma_tilde: h(p2 * self.sigma_tilde, 0.0),
            b0_val: self.b0,
            b1_val: self.b1,
            b2_val: self.b2,
            frequency: self.frequency,
            mu: params.epsilon.sqrt(),
            gamma1: 0.0,
            gamma2: 0.0,
        })
    }
}
