//! Resonance-zone analysis for planar near-Hamiltonian oscillators under
//! two-frequency quasi-periodic forcing.
pub mod averaging;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod numerics;
pub mod pendulum;
pub mod special;

pub use error::{Error, Result};
