//! The forced pendulum `ẍ + sin x = ε[(−1 + p₁ cos 3x + p₂ x α)ẋ + p₃ α]`,
//! `α = cos θ₁ sin θ₂`, on its oscillation cell.

pub mod chart;
pub mod closed_form;
pub mod coefficients;

use std::f64::consts::PI;

use serde::Serialize;

use crate::averaging::{
    find_double_root, resonance_coefficients, solve_resonance, CoefficientOptions, GenValues,
    GeneratingFamily, GeneratingFunction, ResonanceCoefficients, ResonanceIndex, ROOT_SCAN_GRID,
};
use crate::error::{Error, Result};
use crate::hamiltonian::bridges::PENDULUM_MAX_ACTION;
use crate::hamiltonian::{
    action_to_k, frequency_profile_from_chart, k_to_action, DomainKind, Hamiltonian, Perturbation,
    PerturbedSystem, Scalar,
};
use crate::special::complete_elliptic_k;

pub use chart::{pendulum_chart, PendulumChart, PendulumLevel};
pub use closed_form::{
    frequency_jet_at, nome_amplitudes, pendulum_b0, pendulum_b1_b2, NomeAmplitudes,
};
pub use coefficients::{
    cross_term_integrals, pendulum_coefficients, CrossTermIntegrals, PendulumCoefficients,
    PENDULUM_INDEX,
};

/// `H = y²/2 − cos x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PendulumEnergy;

impl Hamiltonian for PendulumEnergy {
    fn energy<D: Scalar>(&self, x: D, y: D) -> D {
        y * y * 0.5 - x.cos()
    }

    fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        (x.sin(), y)
    }
}

/// Forcing `f = (−1 + p₁ cos 3x + p₂ x α) y + p₃ α`, `g = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PendulumForcing {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Perturbation for PendulumForcing {
    fn g<D: Scalar>(&self, x: D, _y: D, _t1: f64, _t2: f64) -> D {
        x * 0.0
    }

    fn f<D: Scalar>(&self, x: D, y: D, t1: f64, t2: f64) -> D {
        let alpha = t1.cos() * t2.sin();
        ((x * 3.0).cos() * self.p1 + x * (self.p2 * alpha) - 1.0) * y + self.p3 * alpha
    }
}

pub type PendulumSystem = PerturbedSystem<PendulumEnergy, PendulumForcing>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PendulumParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub epsilon: f64,
}

impl PendulumParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.p1,
            self.p2,
            self.p3,
            self.omega1,
            self.omega2,
            self.epsilon,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidConfig(
                "pendulum parameters must be finite".into(),
            ));
        }
        if self.p2 < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "p2 must be non-negative, got {}",
                self.p2
            )));
        }
        if self.p3 <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "p3 must be positive, got {}",
                self.p3
            )));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn forcing(&self) -> PendulumForcing {
        PendulumForcing {
            p1: self.p1,
            p2: self.p2,
            p3: self.p3,
        }
    }

    pub fn system(&self) -> Result<PendulumSystem> {
        self.validate()?;
        PerturbedSystem::new(
            PendulumEnergy,
            self.forcing(),
            self.omega1,
            self.omega2,
            self.epsilon,
            DomainKind::Cylinder,
        )
    }

    /// Modulus of the level with `3ω = ω₁ + ω₂`.
    pub fn resonant_modulus(&self) -> Result<f64> {
        let chart = pendulum_chart();
        let profile = frequency_profile_from_chart(&chart)?;
        action_to_k(solve_resonance(
            &profile,
            PENDULUM_INDEX,
            self.omega1,
            self.omega2,
        )?)
    }

    /// Coefficients of the averaged system on the resonant level, from the
    /// closed forms and the one-orbit quadratures.
    pub fn resonance_coefficients(&self) -> Result<ResonanceCoefficients> {
        self.validate()?;
        pendulum_coefficients(self.resonant_modulus()?, self.p1)?.assemble(self)
    }

    /// Modulus of the level with `n ω = m₁ ω₁ + m₂ ω₂`.
    pub fn resonant_modulus_for(&self, idx: ResonanceIndex) -> Result<f64> {
        let chart = pendulum_chart();
        let profile = frequency_profile_from_chart(&chart)?;
        action_to_k(solve_resonance(&profile, idx, self.omega1, self.omega2)?)
    }

    /// Coefficients for an arbitrary resonance index: the closed forms for
    /// `(3, 1, 1)`, torus quadrature otherwise.
    pub fn resonance_coefficients_for(&self, idx: ResonanceIndex) -> Result<ResonanceCoefficients> {
        if idx == PENDULUM_INDEX {
            return self.resonance_coefficients();
        }
        let sys = self.system()?;
        let chart = pendulum_chart();
        let action = k_to_action(self.resonant_modulus_for(idx)?)?;
        resonance_coefficients(&sys, &chart, idx, action, CoefficientOptions::default())
    }
}

/// Generating functions of the pendulum cell parameterised by `p₁`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PendulumFamily;

impl GeneratingFamily for PendulumFamily {
    fn action_range(&self) -> (f64, f64) {
        (0.0, PENDULUM_MAX_ACTION)
    }

    fn values(&self, p1: f64, action: f64) -> Result<GenValues> {
        let k = action_to_k(action)?;
        let (b1, b2) = pendulum_b1_b2(k, p1)?;
        Ok(GenValues {
            b0: pendulum_b0(k, p1)?,
            b1,
            b2,
        })
    }

    fn is_affine(&self) -> bool {
        true
    }
}

/// Double-cycle parameter and the forcing frequency that places the
/// `3ω = ω₁ + ω₂` resonance on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceSetup {
    pub p1: f64,
    pub k: f64,
    pub action: f64,
    pub b2: f64,
    pub omega1: f64,
    pub omega2: f64,
}

/// Solves `B₀ = B₁ = 0` over `p₁` and returns `ω₂ = 3π/(2K(k*)) − ω₁`.
pub fn pendulum_resonance_setup(omega1: f64) -> Result<ResonanceSetup> {
    let roots = find_double_root(&PendulumFamily, -8.0, ROOT_SCAN_GRID)?;
    let root = roots
        .first()
        .ok_or(Error::NonConvergence("pendulum double root"))?;
    let k = action_to_k(root.action)?;
    let omega = PI / (2.0 * complete_elliptic_k(k)?);
    Ok(ResonanceSetup {
        p1: root.parameter,
        k,
        action: k_to_action(k)?,
        b2: root.b2,
        omega1,
        omega2: 3.0 * omega - omega1,
    })
}

/// Closed-form generating function at fixed `p₁`.
#[derive(Debug, Clone, Copy)]
pub struct PendulumGeneratingFunction {
    pub p1: f64,
}

impl GeneratingFunction for PendulumGeneratingFunction {
    fn action_range(&self) -> (f64, f64) {
        (0.0, PENDULUM_MAX_ACTION)
    }

    fn values(&self, action: f64) -> Result<GenValues> {
        PendulumFamily.values(self.p1, action)
    }
}
