//! Unperturbed Hamiltonian, perturbation fields, action–angle charts and the
//! frequency profile of a cell of closed orbits.

pub mod bridges;
pub mod chart;
pub mod profile;
pub mod system;

use num_dual::{Dual2_64, Dual64, DualNum};

pub use bridges::{action_from_frequency, action_to_k, h_to_k, k_to_action, k_to_h};
pub use chart::{
    canonicity_defect, ActionAngleChart, ChartLevel, ChartPoint, HarmonicChart, NumericChart,
};
pub use profile::{frequency_profile_from_chart, FrequencyJet, FrequencyProfile};
pub use system::{action_angle_jets, action_angle_rhs, DomainKind, FieldJets, PerturbedSystem};

/// Real scalar or forward-mode dual number over `f64`.
pub trait Scalar: DualNum<Primitive = f64> + Copy {}
impl<T: DualNum<Primitive = f64> + Copy> Scalar for T {}

/// A quantity together with its first and second derivatives in the action.
pub type Jet = Dual2_64;

/// Energy function `H(x, y)` of the unperturbed system.
pub trait Hamiltonian: Send + Sync {
    fn energy<D: Scalar>(&self, x: D, y: D) -> D;

    /// `(∂H/∂x, ∂H/∂y)`.
    fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let hx = self.energy(Dual64::new(x, 1.0), Dual64::from_re(y)).eps;
        let hy = self.energy(Dual64::from_re(x), Dual64::new(y, 1.0)).eps;
        (hx, hy)
    }
}

/// Perturbation fields `g` (in `ẋ`) and `f` (in `ẏ`), `2π`-periodic in both
/// forcing phases.
pub trait Perturbation: Send + Sync {
    fn g<D: Scalar>(&self, x: D, y: D, theta1: f64, theta2: f64) -> D;
    fn f<D: Scalar>(&self, x: D, y: D, theta1: f64, theta2: f64) -> D;
}

/// `g ≡ f ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoPerturbation;

impl Perturbation for NoPerturbation {
    fn g<D: Scalar>(&self, x: D, _y: D, _t1: f64, _t2: f64) -> D {
        x * 0.0
    }
    fn f<D: Scalar>(&self, x: D, _y: D, _t1: f64, _t2: f64) -> D {
        x * 0.0
    }
}

/// `H = (x² + y²) / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HarmonicEnergy;

impl Hamiltonian for HarmonicEnergy {
    fn energy<D: Scalar>(&self, x: D, y: D) -> D {
        (x * x + y * y) * 0.5
    }
}
