//! Coordinate bridges `h ↔ k ↔ I` on the oscillation cell of the pendulum
//! `H = y²/2 − cos x`, and the generic action integral `dI/dh = 1/ω`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::numerics::gauss_kronrod;
use crate::special::{complementary_modulus, complete_elliptic_ke};

/// `k = sqrt((1 + h) / 2)` for `h ∈ (−1, 1)`.
pub fn h_to_k(h: f64) -> Result<f64> {
    if !(h > -1.0 && h < 1.0) {
        return Err(domain("energy h", h, "(-1, 1)"));
    }
    Ok((0.5 * (1.0 + h)).sqrt())
}

/// `h = 2k² − 1` for `k ∈ (0, 1)`.
pub fn k_to_h(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("modulus k", k, "(0, 1)"));
    }
    Ok(2.0 * k * k - 1.0)
}

/// Action of the level with modulus `k`: `I = (8/π)[E(k) − (1 − k²) K(k)]`.
pub fn k_to_action(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("modulus k", k, "(0, 1)"));
    }
    if k < SERIES_MODULUS {
        return Ok(small_modulus_action(k));
    }
    let (big_k, big_e) = complete_elliptic_ke(k)?;
    let kp = complementary_modulus(k);
    Ok(8.0 / PI * (big_e - kp * kp * big_k))
}

/// Below this modulus the closed form loses digits to cancellation.
const SERIES_MODULUS: f64 = 0.5;

/// `I = 2k² Σ c_n² k^{2n} / (n + 1)` with `c_n = (2n)! / (4^n n!²)`, from
/// integrating `dI/dk = 8kK/π` term by term.
fn small_modulus_action(k: f64) -> f64 {
    let k2 = k * k;
    let (mut c, mut power, mut sum) = (1.0f64, 1.0f64, 0.0f64);
    for n in 0..200 {
        let term = c * c * power / (n as f64 + 1.0);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        c *= (2.0 * n as f64 + 1.0) / (2.0 * n as f64 + 2.0);
        power *= k2;
    }
    2.0 * k2 * sum
}

/// Upper end of the action range of the oscillation cell, `8/π`.
pub const PENDULUM_MAX_ACTION: f64 = 8.0 / PI;

/// Inverse of [`k_to_action`] by safeguarded Newton iteration with
/// `dI/dk = 8 k K(k) / π`.
pub fn action_to_k(action: f64) -> Result<f64> {
    if !(action > 0.0 && action < PENDULUM_MAX_ACTION) {
        return Err(domain("action I", action, "(0, 8/pi)"));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // small-oscillation guess I ≈ 2k²
    let mut k = (0.5 * action).sqrt().min(0.999);
    for _ in 0..100 {
        let r = k_to_action(k)? - action;
        if r > 0.0 {
            hi = k;
        } else {
            lo = k;
        }
        let big_k = complete_elliptic_ke(k)?.0;
        let step = r / (8.0 * k * big_k / PI);
        let mut next = k - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - k).abs() <= 1e-15 * k.max(1e-300) || hi - lo <= 1e-16 {
            return Ok(next);
        }
        k = next;
    }
    if hi - lo < 1e-12 {
        Ok(k)
    } else {
        Err(Error::NonConvergence("action-to-modulus inversion"))
    }
}

/// Generic action `I(h) = ∫_{h_min}^{h} dh′ / ω(h′)`, normalised so that
/// `I(h_min) = 0`.
pub fn action_from_frequency(omega_of_h: impl Fn(f64) -> f64, h_min: f64, h: f64) -> Result<f64> {
    gauss_kronrod(|s| 1.0 / omega_of_h(s), h_min, h, 1e-13)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn energy_modulus_bridge() {
        assert_abs_diff_eq!(
            h_to_k(0.0).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-16
        );
        // 1 + h is only representable to about 1e-16 absolute
        let k = h_to_k(-1.0 + 1e-9).unwrap();
        assert!((k - 2.236_067_977_5e-5).abs() < 1e-7 * k);
        for &h in &[-0.5, 0.0, 0.5] {
            assert_abs_diff_eq!(k_to_h(h_to_k(h).unwrap()).unwrap(), h, epsilon = 1e-15);
        }
        assert!(h_to_k(1.0).is_err());
        assert!(h_to_k(-1.0).is_err());
    }

    #[test]
    fn action_round_trip() {
        for &k in &[1e-4, 0.1, 0.5, 0.759, 0.99] {
            let i = k_to_action(k).unwrap();
            assert_abs_diff_eq!(action_to_k(i).unwrap(), k, epsilon = 1e-12);
        }
        assert!(k_to_action(1e-6).unwrap() < 1e-11);
    }

    #[test]
    fn series_meets_closed_form() {
        let k = SERIES_MODULUS;
        let (big_k, big_e) = complete_elliptic_ke(k).unwrap();
        let closed = 8.0 / PI * (big_e - (1.0 - k * k) * big_k);
        assert_abs_diff_eq!(small_modulus_action(k), closed, epsilon = 1e-15);
        assert_abs_diff_eq!(small_modulus_action(1e-3), 2e-6, epsilon = 1e-12);
    }
}
