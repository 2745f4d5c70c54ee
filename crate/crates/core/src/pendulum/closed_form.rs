//! Closed-form generating function and frequency coefficients of the pendulum
//! oscillation cell, as functions of the modulus `k`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::hamiltonian::FrequencyJet;
use crate::special::{complete_elliptic_ke, nome};

fn check(k: f64) -> Result<()> {
    if k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(domain("modulus k", k, "(0, 1)"))
    }
}

/// Generating function `B₀` of the forced pendulum on the level with modulus `k`.
pub fn pendulum_b0(k: f64, p1: f64) -> Result<f64> {
    check(k)?;
    let (big_k, big_e) = complete_elliptic_ke(k)?;
    let k2 = k * k;
    let first = (1.0 - k2) * (105.0 + (128.0 * k2 * k2 - 80.0 * k2 + 3.0) * p1) * big_k;
    let second = (-105.0 + (2.0 * k2 - 1.0) * (128.0 * k2 * k2 - 128.0 * k2 + 3.0) * p1) * big_e;
    Ok(8.0 / (105.0 * PI) * (first + second))
}

/// `(B₁, B₂)`: first and half second action derivatives of [`pendulum_b0`].
pub fn pendulum_b1_b2(k: f64, p1: f64) -> Result<(f64, f64)> {
    check(k)?;
    let (big_k, big_e) = complete_elliptic_ke(k)?;
    let k2 = k * k;
    let k4 = k2 * k2;
    let k6 = k4 * k2;
    let kp2 = (1.0 - k) * (1.0 + k);
    let b1 = -(15.0 + (128.0 * k4 - 144.0 * k2 + 31.0) * p1
        - (256.0 * k4 - 256.0 * k2 + 46.0) * p1 * big_e / big_k)
        / 15.0;
    let b2 = p1 * PI / (120.0 * k2 * kp2 * big_k.powi(3))
        * ((384.0 * k6 - 656.0 * k4 + 295.0 * k2 - 23.0) * big_k * big_k
            - (768.0 * k6 - 1280.0 * k4 + 558.0 * k2 - 46.0) * big_k * big_e
            - (128.0 * k4 - 128.0 * k2 + 23.0) * big_e * big_e);
    Ok((b1, b2))
}

/// `ω = π/(2K)` with `b₁ = ω′`, `b₂ = ω″/2`, `b₃ = ω‴/6` in the action.
pub fn frequency_jet_at(k: f64) -> Result<FrequencyJet> {
    check(k)?;
    let (kk, ee) = complete_elliptic_ke(k)?;
    let k2 = k * k;
    let k4 = k2 * k2;
    // k² − 1, kept accurate near k = 1
    let m = -(1.0 - k) * (1.0 + k);
    let b1 = PI * PI / 16.0 * (m * kk + ee) / (k2 * m * kk.powi(3));
    let b2 = -PI.powi(3) / 256.0 * (m * kk * kk - 2.0 * (k2 - 2.0) * kk * ee - 3.0 * ee * ee)
        / (k4 * m * m * kk.powi(5));
    let b3 = PI.powi(4) / 6144.0
        * ((k4 + 2.0 * k2 - 3.0) * kk.powi(3) - (2.0 * k4 + 3.0 * k2 - 13.0) * kk * kk * ee
            + 5.0 * (k2 - 5.0) * kk * ee * ee
            + 15.0 * ee.powi(3))
        / (k4 * k2 * m.powi(3) * kk.powi(7));
    Ok(FrequencyJet {
        omega: PI / (2.0 * kk),
        b1,
        b2,
        b3,
    })
}

/// Nome-series amplitudes of the `p₃`-forced harmonics on the level `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomeAmplitudes {
    /// Amplitude of `sin 3v` in the averaged action rate.
    pub drift: f64,
    /// Amplitude of `cos 3v` in the divergence, per unit `p₂`.
    pub divergence: f64,
    /// Amplitude of `sin 3v` in the first action derivative of the rate.
    pub drift_slope: f64,
    /// Amplitude of `sin 3v` in half the second action derivative.
    pub drift_curvature: f64,
}

pub fn nome_amplitudes(k: f64) -> Result<NomeAmplitudes> {
    check(k)?;
    let (kk, ee) = complete_elliptic_ke(k)?;
    let a = nome(k)?.value();
    let a3 = a.powi(3);
    let root = a.powf(1.5);
    let k2 = k * k;
    let kp2 = (1.0 - k) * (1.0 + k);
    let drift = -2.0 * root / (1.0 + a3);
    let divergence = 2.0 * root / (3.0 * (1.0 + a3));
    let drift_slope =
        PI.powi(3) / (16.0 * k2 * kp2 * kk.powi(3)) * 3.0 * root * (a3 - 1.0) / (1.0 + a3).powi(2);
    let drift_curvature = PI.powi(4) / (1024.0 * k2 * k2 * kp2 * kp2 * kk.powi(6)) * 3.0 * root
        / (1.0 + a3).powi(3)
        * (4.0 * ((1.0 + k2) * kk - 3.0 * ee) * kk * (a3 * a3 - 1.0)
            - 3.0 * PI * PI * (a3 * a3 - 6.0 * a3 + 1.0));
    Ok(NomeAmplitudes {
        drift,
        divergence,
        drift_slope,
        drift_curvature,
    })
}
