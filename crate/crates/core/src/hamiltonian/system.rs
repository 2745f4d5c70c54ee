use std::f64::consts::TAU;

use num_dual::Dual64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::chart::{ActionAngleChart, ChartPoint};
use super::{Hamiltonian, Jet, Perturbation};

/// Whether `x` lives on the line or on the circle `x mod 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Plane,
    Cylinder,
}

/// Largest denominator tried when testing the frequency ratio for rationality.
const RATIONAL_DENOMINATOR: i64 = 64;
const RATIONAL_TOL: f64 = 1e-9;

/// The forced system `ẋ = H_y + ε g`, `ẏ = −H_x + ε f` with phases
/// `θ₁ = ω₁ t`, `θ₂ = ω₂ t`.
#[derive(Debug, Clone)]
pub struct PerturbedSystem<H, P> {
    pub hamiltonian: H,
    pub perturbation: P,
    pub omega1: f64,
    pub omega2: f64,
    pub epsilon: f64,
    pub domain: DomainKind,
}

impl<H: Hamiltonian, P: Perturbation> PerturbedSystem<H, P> {
    pub fn new(
        hamiltonian: H,
        perturbation: P,
        omega1: f64,
        omega2: f64,
        epsilon: f64,
        domain: DomainKind,
    ) -> Result<Self> {
        let sys = Self {
            hamiltonian,
            perturbation,
            omega1,
            omega2,
            epsilon,
            domain,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be a finite non-negative number, got {}",
                self.epsilon
            )));
        }
        if !(self.omega1 > 0.0 && self.omega2 > 0.0) || !(self.omega1 * self.omega2).is_finite() {
            return Err(Error::InvalidConfig(format!(
                "forcing frequencies must be positive, got ({}, {})",
                self.omega1, self.omega2
            )));
        }
        if let Some((p, q)) = rational_approximation(self.omega1 / self.omega2) {
            return Err(Error::InvalidConfig(format!(
                "omega1/omega2 = {} is numerically rational ({p}/{q})",
                self.omega1 / self.omega2
            )));
        }
        self.check_periodicity()
    }

    fn check_periodicity(&self) -> Result<()> {
        let probes = [-1.1, 0.3, 1.7];
        let phases = [0.0, 1.3, 4.4];
        for &x in &probes {
            for &y in &probes {
                for &a in &phases {
                    for &b in &phases {
                        let base = self.forcing(x, y, a, b);
                        for shifted in [
                            self.forcing(x, y, a + TAU, b),
                            self.forcing(x, y, a, b + TAU),
                        ] {
                            let scale = 1.0 + base.0.abs().max(base.1.abs());
                            if (shifted.0 - base.0).abs().max((shifted.1 - base.1).abs())
                                > 1e-9 * scale
                            {
                                return Err(Error::InvalidConfig(
                                    "perturbation is not 2π-periodic in the forcing phases".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn forcing(&self, x: f64, y: f64, t1: f64, t2: f64) -> (f64, f64) {
        (
            self.perturbation.g(x, y, t1, t2),
            self.perturbation.f(x, y, t1, t2),
        )
    }

    /// Full vector field at time `t`.
    pub fn rhs(&self, t: f64, state: &[f64; 2]) -> [f64; 2] {
        let [x, y] = *state;
        let (hx, hy) = self.hamiltonian.gradient(x, y);
        let (t1, t2) = (self.omega1 * t, self.omega2 * t);
        let (g, f) = self.forcing(x, y, t1, t2);
        [hy + self.epsilon * g, -hx + self.epsilon * f]
    }
}

/// Returns `(p, q)` if `ratio` lies within `1e-9` of some `p/q` with `q ≤ 64`.
fn rational_approximation(ratio: f64) -> Option<(i64, i64)> {
    (1..=RATIONAL_DENOMINATOR).find_map(|q| {
        let p = (ratio * q as f64).round() as i64;
        (p >= 1 && (ratio - p as f64 / q as f64).abs() < RATIONAL_TOL).then_some((p, q))
    })
}

/// `F`, `G` and their action derivatives at one point of the extended phase
/// space, where `İ = ε F` and `θ̇ = ω(I) + ε G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJets {
    /// `F = f X_θ − g Y_θ` with `F_I`, `F_II`.
    pub action_rate: Jet,
    /// `G = −f X_I + g Y_I` with `G_I`.
    pub phase_shift: Dual64,
}

/// Evaluates the perturbation in action–angle form on a prepared chart point.
pub fn action_angle_jets<P: Perturbation>(
    perturbation: &P,
    point: &ChartPoint,
    theta1: f64,
    theta2: f64,
) -> FieldJets {
    let f = perturbation.f(point.x, point.y, theta1, theta2);
    let g = perturbation.g(point.x, point.y, theta1, theta2);
    let action_rate = f * point.x_theta - g * point.y_theta;
    let lower = |j: Jet| Dual64::new(j.re, j.v1);
    let shifted = |j: Jet| Dual64::new(j.v1, j.v2);
    let phase_shift = -lower(f) * shifted(point.x) + lower(g) * shifted(point.y);
    FieldJets {
        action_rate,
        phase_shift,
    }
}

/// `(F, G)` of the perturbed system written in the chart's action–angle variables.
pub fn action_angle_rhs<H: Hamiltonian, P: Perturbation>(
    chart: &dyn ActionAngleChart,
    sys: &PerturbedSystem<H, P>,
    action: f64,
    theta: f64,
    theta1: f64,
    theta2: f64,
) -> Result<(f64, f64)> {
    let point = chart.point(action, theta)?;
    let jets = action_angle_jets(&sys.perturbation, &point, theta1, theta2);
    Ok((jets.action_rate.re, jets.phase_shift.re))
}
