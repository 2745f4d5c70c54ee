//! Nome expansions of the pendulum oscillation-cell functions.
//!
//! On the level with modulus `k` the pendulum solution is
//! `x = 2 asin(k sn(2Kθ/π))`, `y = 2k cn(2Kθ/π)`, and every quantity below is
//! an odd-harmonic series in θ with coefficients in powers of the nome `a`.
//! Derivatives are taken with respect to the action `I` of the level, using
//! `dk/dI = π / (8 k K)`.

use std::f64::consts::PI;

use crate::error::{domain, Result};

use super::elliptic::{complementary_modulus, complete_elliptic_ke, nome};

/// Hard cap on the number of harmonics kept in any series.
pub const MAX_TERMS: usize = 64;
const ADAPTIVE_RTOL: f64 = 1e-15;

/// How many odd harmonics to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Exactly this many terms (clamped to [`MAX_TERMS`]).
    Fixed(usize),
    /// Stop once a coefficient falls below `1e-15` of the accumulated
    /// coefficient mass, or at [`MAX_TERMS`].
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Sine,
    Cosine,
}

/// `Σ_j c_j sin((2j+1)θ)` or `Σ_j c_j cos((2j+1)θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddHarmonicSeries {
    pub coeffs: Vec<f64>,
    pub parity: Parity,
}

impl OddHarmonicSeries {
    /// Builds a series from a coefficient generator indexed by `j = 1, 2, …`
    /// (harmonic `2j - 1`).
    fn build(parity: Parity, truncation: Truncation, mut coef: impl FnMut(usize) -> f64) -> Self {
        let mut coeffs = Vec::new();
        match truncation {
            Truncation::Fixed(n) => {
                for j in 1..=n.min(MAX_TERMS) {
                    coeffs.push(coef(j));
                }
            }
            Truncation::Adaptive => {
                let mut mass = 0.0;
                for j in 1..=MAX_TERMS {
                    let c = coef(j);
                    coeffs.push(c);
                    mass += c.abs();
                    if c.abs() < ADAPTIVE_RTOL * mass || mass == 0.0 {
                        break;
                    }
                }
            }
        }
        Self { coeffs, parity }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (s2, c2) = (2.0 * theta).sin_cos();
        let (mut s, mut c) = (s1, c1);
        let mut acc = 0.0;
        for &coef in &self.coeffs {
            acc += coef
                * match self.parity {
                    Parity::Sine => s,
                    Parity::Cosine => c,
                };
            let ns = s * c2 + c * s2;
            c = c * c2 - s * s2;
            s = ns;
        }
        acc
    }
}

/// Partial sum of `(4kK/π) cn(2Kθ/π, k) = 8 Σ a^{j-1/2} / (1 + a^{2j-1}) cos((2j-1)θ)`.
pub fn fourier_cn_series(k: f64, theta: f64, truncation: Truncation) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("modulus k", k, "(0, 1)"));
    }
    let a = nome(k)?.value();
    Ok(cn_series(a, truncation).eval(theta))
}

fn cn_series(a: f64, truncation: Truncation) -> OddHarmonicSeries {
    OddHarmonicSeries::build(Parity::Cosine, truncation, |j| {
        let q = a.powi(2 * j as i32 - 1);
        8.0 * a.powf(j as f64 - 0.5) / (1.0 + q)
    })
}

/// All six series needed for the pendulum chart on one level, with the
/// constants `K`, `E`, `a` they were built from.
#[derive(Debug, Clone)]
pub struct PendulumKernels {
    pub k: f64,
    pub big_k: f64,
    pub big_e: f64,
    pub nome: f64,
    /// `x(θ)`
    pub x: OddHarmonicSeries,
    /// `∂x/∂θ = y/ω`
    pub x_theta: OddHarmonicSeries,
    /// `∂x/∂I`
    pub x_action: OddHarmonicSeries,
    /// `∂²x/∂I²`
    pub x_action2: OddHarmonicSeries,
    /// `∂/∂I (∂x/∂θ)`
    pub x_theta_action: OddHarmonicSeries,
    /// `∂²/∂I² (∂x/∂θ)`
    pub x_theta_action2: OddHarmonicSeries,
}

/// Values of the six kernels at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValues {
    pub x: f64,
    pub x_theta: f64,
    pub x_action: f64,
    pub x_action2: f64,
    pub x_theta_action: f64,
    pub x_theta_action2: f64,
}

impl PendulumKernels {
    pub fn new(k: f64, truncation: Truncation) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(domain("modulus k", k, "(0, 1)"));
        }
        let (big_k, big_e) = complete_elliptic_ke(k)?;
        let a = nome(k)?.value();
        let kp2 = complementary_modulus(k).powi(2);
        let first = PI.powi(3) / (4.0 * k * k * kp2 * big_k.powi(3));
        let second = PI.powi(4) / (32.0 * k.powi(4) * kp2 * kp2 * big_k.powi(5));
        let mix = (1.0 + k * k) * big_k - 3.0 * big_e;
        let tail = PI * PI / (4.0 * big_k);

        let root = |j: usize| a.powf(j as f64 - 0.5);
        let q = |j: usize| a.powi(2 * j as i32 - 1);
        let odd = |j: usize| (2 * j - 1) as f64;
        let s1 = |j: usize| root(j) * (1.0 - q(j)) / (1.0 + q(j)).powi(2);
        let s2 = |j: usize| root(j) * (1.0 - 6.0 * q(j) + q(j) * q(j)) / (1.0 + q(j)).powi(3);

        let x = OddHarmonicSeries::build(Parity::Sine, truncation, |j| {
            8.0 * root(j) / (odd(j) * (1.0 + q(j)))
        });
        let x_theta = cn_series(a, truncation);
        let x_action = OddHarmonicSeries::build(Parity::Sine, truncation, |j| first * s1(j));
        let x_theta_action =
            OddHarmonicSeries::build(Parity::Cosine, truncation, |j| first * odd(j) * s1(j));
        let x_action2 = OddHarmonicSeries::build(Parity::Sine, truncation, |j| {
            second * (mix * s1(j) + tail * odd(j) * s2(j))
        });
        let x_theta_action2 = OddHarmonicSeries::build(Parity::Cosine, truncation, |j| {
            second * (mix * odd(j) * s1(j) + tail * odd(j) * odd(j) * s2(j))
        });
        Ok(Self {
            k,
            big_k,
            big_e,
            nome: a,
            x,
            x_theta,
            x_action,
            x_action2,
            x_theta_action,
            x_theta_action2,
        })
    }

    /// Evaluates every kernel at `theta` sharing one harmonic recurrence.
    pub fn eval(&self, theta: f64) -> KernelValues {
        let terms = [
            &self.x,
            &self.x_theta,
            &self.x_action,
            &self.x_action2,
            &self.x_theta_action,
            &self.x_theta_action2,
        ]
        .iter()
        .map(|s| s.len())
        .max()
        .unwrap_or(0);
        let (s1, c1) = theta.sin_cos();
        let (s2, c2) = (2.0 * theta).sin_cos();
        let (mut s, mut c) = (s1, c1);
        let mut out = [0.0; 6];
        for j in 0..terms {
            let series = [
                &self.x,
                &self.x_theta,
                &self.x_action,
                &self.x_action2,
                &self.x_theta_action,
                &self.x_theta_action2,
            ];
            for (slot, ser) in out.iter_mut().zip(series) {
                if let Some(&coef) = ser.coeffs.get(j) {
                    *slot += coef
                        * match ser.parity {
                            Parity::Sine => s,
                            Parity::Cosine => c,
                        };
                }
            }
            let ns = s * c2 + c * s2;
            c = c * c2 - s * s2;
            s = ns;
        }
        KernelValues {
            x: out[0],
            x_theta: out[1],
            x_action: out[2],
            x_action2: out[3],
            x_theta_action: out[4],
            x_theta_action2: out[5],
        }
    }
}
