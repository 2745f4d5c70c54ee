use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::FrequencyProfile;
use crate::numerics::bisect;

/// Resonance `n ω(I) = m₁ ω₁ + m₂ ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceIndex {
    pub n: u32,
    pub m1: i32,
    pub m2: i32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl ResonanceIndex {
    pub fn new(n: u32, m1: i32, m2: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig(
                "resonance order n must be at least 1".into(),
            ));
        }
        let g = gcd(
            gcd(n as u64, m1.unsigned_abs() as u64),
            m2.unsigned_abs() as u64,
        );
        if g != 1 {
            return Err(Error::InvalidConfig(format!(
                "resonance index ({n}, {m1}, {m2}) is not reduced (gcd {g})"
            )));
        }
        Ok(Self { n, m1, m2 })
    }

    /// `(m₁ ω₁ + m₂ ω₂) / n`.
    pub fn target_frequency(&self, omega1: f64, omega2: f64) -> f64 {
        (self.m1 as f64 * omega1 + self.m2 as f64 * omega2) / self.n as f64
    }

    /// `(m₁ θ₁ + m₂ θ₂) / n`.
    pub fn forcing_phase(&self, theta1: f64, theta2: f64) -> f64 {
        (self.m1 as f64 * theta1 + self.m2 as f64 * theta2) / self.n as f64
    }
}

/// Relative offset of the bracket ends from the open endpoints of the cell.
const END_OFFSET: f64 = 1e-12;

/// Action of the resonant level, by bisection of the monotone frequency.
pub fn solve_resonance(
    profile: &FrequencyProfile<'_>,
    idx: ResonanceIndex,
    omega1: f64,
    omega2: f64,
) -> Result<f64> {
    if !profile.is_strictly_monotone() {
        return Err(Error::Degenerate(
            "frequency is constant on part of the cell; the resonant level is not isolated".into(),
        ));
    }
    let target = idx.target_frequency(omega1, omega2);
    let (lo, hi) = profile.action_range();
    let a = lo + END_OFFSET * (hi - lo);
    let b = hi - END_OFFSET * (hi - lo);
    let (wa, wb) = (profile.omega(a)?, profile.omega(b)?);
    let (wmin, wmax) = (wa.min(wb), wa.max(wb));
    if !(target > wmin && target < wmax) {
        return Err(Error::FrequencyOutOfRange {
            target,
            lo: wmin,
            hi: wmax,
        });
    }
    let n = idx.n as f64;
    let residual = |i: f64| n * profile.omega(i).unwrap_or(f64::NAN) - n * target;
    let root = bisect(residual, a, b, 0.0)?;
    let res = residual(root).abs();
    if res > 1e-12 {
        return Err(Error::NonConvergence("resonance bisection"));
    }
    Ok(root)
}
