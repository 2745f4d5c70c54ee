//! Quadrature, root finding and ODE integration used throughout the crate.

pub mod ode;
pub mod quadrature;
pub mod roots;

pub use ode::{DenseStep, Dopri5, Flow, Outcome};
pub use quadrature::{gauss_kronrod, periodic_mean, periodic_mean_adaptive};
pub use roots::{bisect, brent, newton2};
