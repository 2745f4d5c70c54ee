use std::f64::consts::{PI, TAU};

use num_dual::DualNum;

use crate::error::{domain, Result};
use crate::hamiltonian::bridges::PENDULUM_MAX_ACTION;
use crate::hamiltonian::{
    action_to_k, h_to_k, k_to_action, ActionAngleChart, ChartLevel, ChartPoint, FrequencyJet, Jet,
};
use crate::special::{complete_elliptic_k, incomplete_elliptic_f, PendulumKernels, Truncation};

use super::closed_form::frequency_jet_at;

/// Action–angle chart of the oscillation cell of `H = y²/2 − cos x`:
/// `x = 2 asin(k sn(2Kθ/π))`, `y = 2k cn(2Kθ/π)`, evaluated through the
/// nome series of `x`, `∂x/∂θ` and their action derivatives.
#[derive(Debug, Clone, Copy)]
pub struct PendulumChart {
    pub truncation: Truncation,
}

impl Default for PendulumChart {
    fn default() -> Self {
        Self {
            truncation: Truncation::Adaptive,
        }
    }
}

pub fn pendulum_chart() -> PendulumChart {
    PendulumChart::default()
}

/// One level of the chart with its kernels and frequency jet.
pub struct PendulumLevel {
    pub kernels: PendulumKernels,
    omega: Jet,
}

impl PendulumLevel {
    pub fn modulus(&self) -> f64 {
        self.kernels.k
    }
}

impl ChartLevel for PendulumLevel {
    fn point(&self, theta: f64) -> ChartPoint {
        let kv = self.kernels.eval(theta);
        let x = Jet::new(kv.x, kv.x_action, kv.x_action2);
        let x_theta = Jet::new(kv.x_theta, kv.x_theta_action, kv.x_theta_action2);
        ChartPoint {
            x,
            y: self.omega * x_theta,
            x_theta,
            y_theta: -x.sin() / self.omega,
        }
    }
}

impl PendulumChart {
    pub fn level_at_modulus(&self, k: f64) -> Result<PendulumLevel> {
        let kernels = PendulumKernels::new(k, self.truncation)?;
        let jet = frequency_jet_at(k)?;
        Ok(PendulumLevel {
            kernels,
            omega: Jet::new(jet.omega, jet.b1, 2.0 * jet.b2),
        })
    }
}

impl ActionAngleChart for PendulumChart {
    fn action_range(&self) -> (f64, f64) {
        (0.0, PENDULUM_MAX_ACTION)
    }

    fn omega(&self, action: f64) -> Result<f64> {
        self.check_action(action)?;
        Ok(PI / (2.0 * complete_elliptic_k(action_to_k(action)?)?))
    }

    fn frequency_jet(&self, action: f64) -> Result<FrequencyJet> {
        self.check_action(action)?;
        frequency_jet_at(action_to_k(action)?)
    }

    fn level(&self, action: f64) -> Result<Box<dyn ChartLevel + '_>> {
        self.check_action(action)?;
        Ok(Box::new(self.level_at_modulus(action_to_k(action)?)?))
    }

    fn invert(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let x = x - TAU * (x / TAU).round();
        let h = 0.5 * y * y - x.cos();
        if !(h > -1.0 && h < 1.0) {
            return Err(domain("energy h", h, "(-1, 1)"));
        }
        let k = h_to_k(h)?;
        let action = k_to_action(k)?;
        // amplitude φ with sn = sin φ, cn = cos φ
        let phi = ((0.5 * x).sin() / k).atan2(y / (2.0 * k));
        let big_k = complete_elliptic_k(k)?;
        let theta = (PI * incomplete_elliptic_f(phi, k) / (2.0 * big_k)).rem_euclid(TAU);
        Ok((action, theta))
    }
}
