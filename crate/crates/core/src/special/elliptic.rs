use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};

/// Relative stopping threshold of the arithmetic-geometric mean.
const AGM_TOL: f64 = 1e-16;
const AGM_MAX_ITER: usize = 64;

/// Elliptic modulus `k`, validated to lie in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(domain("modulus k", k, "[0, 1)"));
        }
        Ok(Self(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `k' = sqrt(1 - k²)`.
    pub fn complement(self) -> f64 {
        complementary_modulus(self.0)
    }
}

/// Nome `a = exp(-π K(k') / K(k))`, in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Nome(f64);

impl Nome {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `sqrt(1 - k²)` evaluated as `sqrt((1 - k)(1 + k))` to keep accuracy near `k = 1`.
pub fn complementary_modulus(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).max(0.0).sqrt()
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() < AGM_TOL * a {
            break;
        }
        let next = (0.5 * (a + b), (a * b).sqrt());
        if next == (a, b) {
            break;
        }
        (a, b) = next;
    }
    a
}

/// Runs the AGM of `(1, k')` and returns `(K, E)`.
///
/// `K = π / (2 M)` where `M` is the limit, and
/// `E = K (1 - Σ 2^(n-1) c_n²)` with `c_0 = k`, `c_{n+1} = (a_n - b_n) / 2`.
fn agm_k_e(k: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = complementary_modulus(k);
    let mut c = k;
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() < AGM_TOL * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        c = 0.5 * (a - b);
        weight *= 2.0;
        sum += weight * c * c;
        if next_a == a && next_b == b {
            break;
        }
        a = next_a;
        b = next_b;
    }
    let big_k = FRAC_PI_2 / a;
    (big_k, big_k * (1.0 - sum))
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫₀^{π/2} dφ / sqrt(1 - k² sin²φ)`, for `0 ≤ k < 1`.
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain("modulus k", k, "[0, 1)"));
    }
    Ok(agm_k_e(k).0)
}

/// Complete elliptic integral of the second kind,
/// `E(k) = ∫₀^{π/2} sqrt(1 - k² sin²φ) dφ`, for `0 ≤ k ≤ 1`.
pub fn complete_elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(domain("modulus k", k, "[0, 1]"));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    Ok(agm_k_e(k).1)
}

/// Both complete integrals from a single AGM run, for `0 ≤ k < 1`.
pub fn complete_elliptic_ke(k: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain("modulus k", k, "[0, 1)"));
    }
    Ok(agm_k_e(k))
}

/// Nome `a = exp(-π K(k') / K(k))` for `0 < k < 1`.
///
/// The limits `a → 0` as `k → 0` and `a → 1` as `k → 1` are not returned;
/// both endpoints are domain errors.
pub fn nome(k: f64) -> Result<Nome> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("modulus k", k, "(0, 1)"));
    }
    let big_k = agm_k_e(k).0;
    // K(k') = π / (2 AGM(1, k)), avoiding the cancellation in sqrt(1 - k'²)
    let big_kp = FRAC_PI_2 / agm(1.0, k);
    Ok(Nome((-PI * big_kp / big_k).exp()))
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    for _ in 0..200 {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0)
                / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    let mu = (x + y + z) / 3.0;
    1.0 / mu.sqrt()
}

/// Incomplete integral of the first kind `F(φ, k)` for any real amplitude,
/// using `F(φ + jπ) = F(φ) + 2jK`.
pub(crate) fn incomplete_elliptic_f(phi: f64, k: f64) -> f64 {
    let big_k = agm_k_e(k).0;
    let turns = (phi / PI).round();
    let rem = phi - turns * PI;
    let (s, c) = rem.sin_cos();
    let base = s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
    base + 2.0 * turns * big_k
}
