//! Generating function, resonance condition and the coefficient functions of
//! the resonance-zone averaged system.

pub mod coefficients;
pub mod genfun;
pub mod harmonic;
pub mod periodic;
pub mod resonance;
pub mod roots;

pub use coefficients::{
    resonance_coefficients, CoefficientOptions, ResonanceCoefficients, COINCIDENCE_TOL,
};
pub use genfun::{
    generating_function, GenValues, GeneratingFunction, QuadratureGeneratingFunction,
};
pub use harmonic::{Harmonic, HarmonicCoefficients};
pub use periodic::{mean_free_decompose, PeriodicFn};
pub use resonance::{solve_resonance, ResonanceIndex};
pub use roots::{
    find_double_root, find_simple_roots, DoubleRoot, GeneratingFamily, SimpleRoot, Stability,
    ROOT_SCAN_GRID,
};
