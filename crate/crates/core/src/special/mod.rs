//! Complete elliptic integrals, Jacobi elliptic functions, the nome and the
//! odd-harmonic Fourier kernels built on them.
//!
//! All routines are pure and use the modulus `k` (not the parameter `m = k²`).

mod elliptic;
mod fourier;
mod jacobi;

pub(crate) use elliptic::incomplete_elliptic_f;
pub use elliptic::{
    complementary_modulus, complete_elliptic_e, complete_elliptic_k, complete_elliptic_ke, nome,
    EllipticModulus, Nome,
};
pub use fourier::{
    fourier_cn_series, KernelValues, OddHarmonicSeries, Parity, PendulumKernels, Truncation,
    MAX_TERMS,
};
pub use jacobi::{jacobi_sn_cn_dn, jacobi_zeta, JacobiState};
