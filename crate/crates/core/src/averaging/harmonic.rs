use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::FrequencyJet;

use super::coefficients::ResonanceCoefficients;
use super::periodic::PeriodicFn;
use super::resonance::ResonanceIndex;

/// `cos·cos(n v) + sin·sin(n v)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Harmonic {
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

impl Harmonic {
    pub fn new(cos: f64, sin: f64) -> Self {
        Self { cos, sin }
    }

    fn periodic(self, order: u32) -> PeriodicFn {
        PeriodicFn::first_harmonic(order, self.cos, self.sin)
    }
}

/// Averaged-system coefficients given directly as first harmonics in `n v`,
/// for studying the resonance zone without an underlying oscillator.
/// `σ̃ = P̃₀ + Q₀′` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicCoefficients {
    pub order: u32,
    #[serde(default = "unit_action")]
    pub action: f64,
    #[serde(default)]
    pub omega: f64,
    pub b1: f64,
    #[serde(default)]
    pub b2: f64,
    #[serde(default)]
    pub b3: f64,
    pub a_tilde: Harmonic,
    #[serde(default)]
    pub p0_tilde: Harmonic,
    #[serde(default)]
    pub q0: Harmonic,
    #[serde(default)]
    pub p1_tilde: Harmonic,
    #[serde(default)]
    pub q1: Harmonic,
    /// Generating-function values `B₀`, `B₁`, `B₂` on the resonant level.
    #[serde(default)]
    pub gen_b0: f64,
    #[serde(default)]
    pub gen_b1: f64,
    #[serde(default)]
    pub gen_b2: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub gamma1: f64,
    #[serde(default)]
    pub gamma2: f64,
}

fn unit_action() -> f64 {
    1.0
}

impl HarmonicCoefficients {
    pub fn coefficients(&self) -> Result<ResonanceCoefficients> {
        let scalars = [
            self.action,
            self.omega,
            self.b1,
            self.b2,
            self.b3,
            self.gen_b0,
            self.gen_b1,
            self.gen_b2,
            self.epsilon,
            self.gamma1,
            self.gamma2,
        ];
        let harmonics = [self.a_tilde, self.p0_tilde, self.q0, self.p1_tilde, self.q1];
        if !scalars
            .iter()
            .chain(harmonics.iter().flat_map(|h| [&h.cos, &h.sin]))
            .all(|x| x.is_finite())
        {
            return Err(Error::InvalidConfig(
                "harmonic coefficients must be finite".into(),
            ));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if self.b1 == 0.0 {
            return Err(Error::Degenerate(
                "frequency derivative b1 vanishes at the resonant level".into(),
            ));
        }
        let n = self.order;
        let index = ResonanceIndex::new(n, 1, 0)?;
        let p0 = self.p0_tilde.periodic(n);
        let q0 = self.q0.periodic(n);
        let sigma = p0.add(&q0.derivative());
        Ok(ResonanceCoefficients {
            index,
            action: self.action,
            a_tilde: self.a_tilde.periodic(n),
            p0_tilde: p0,
            q0,
            p1_tilde: self.p1_tilde.periodic(n),
            q1: self.q1.periodic(n),
            sigma_tilde: sigma,
            b0_val: self.gen_b0,
            b1_val: self.gen_b1,
            b2_val: self.gen_b2,
            frequency: FrequencyJet {
                omega: self.omega,
                b1: self.b1,
                b2: self.b2,
                b3: self.b3,
            },
            mu: self.epsilon.sqrt(),
            gamma1: self.gamma1,
            gamma2: self.gamma2,
        })
    }

    /// Sets `P̃₀ = −Q₀′` so that `σ̃ ≡ 0`.
    pub fn divergence_free(mut self) -> Self {
        let n = self.order as f64;
        self.p0_tilde = Harmonic::new(-n * self.q0.sin, n * self.q0.cos);
        self
    }
}
