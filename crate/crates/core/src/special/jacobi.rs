use crate::error::{domain, Result};

use super::elliptic::complementary_modulus;

/// Transformed modulus below which the Landen descent stops.
const LANDEN_TOL: f64 = 1e-14;
const MAX_DEPTH: usize = 32;

/// Descending Landen (AGM) sequence for a fixed modulus, reusable across
/// arguments. `a[n]`, `c[n]` follow the usual AGM indexing with `a[0] = 1`,
/// `c[0] = k`.
#[derive(Debug, Clone)]
pub struct JacobiState {
    k: f64,
    quarter_period: f64,
    a: Vec<f64>,
    c: Vec<f64>,
}

impl JacobiState {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(domain("modulus k", k, "[0, 1)"));
        }
        let mut a = vec![1.0];
        let mut c = vec![k];
        let mut b = complementary_modulus(k);
        while c.last().copied().unwrap_or(0.0) / a.last().copied().unwrap_or(1.0) >= LANDEN_TOL
            && a.len() <= MAX_DEPTH
        {
            let an = *a.last().unwrap_or(&1.0);
            a.push(0.5 * (an + b));
            c.push(0.5 * (an - b));
            b = (an * b).sqrt();
        }
        let quarter_period = std::f64::consts::FRAC_PI_2 / a[a.len() - 1];
        Ok(Self {
            k,
            quarter_period,
            a,
            c,
        })
    }

    pub fn modulus(&self) -> f64 {
        self.k
    }

    /// `K(k)`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }

    /// Amplitudes `φ_0 .. φ_N` of the backward Landen recursion.
    fn amplitudes(&self, u: f64) -> Vec<f64> {
        let depth = self.a.len() - 1;
        let mut phi = vec![0.0; depth + 1];
        phi[depth] = (depth as f64).exp2() * self.a[depth] * u;
        for n in (1..=depth).rev() {
            let s = (self.c[n] / self.a[n] * phi[n].sin()).clamp(-1.0, 1.0);
            phi[n - 1] = 0.5 * (phi[n] + s.asin());
        }
        phi
    }

    fn reduce(&self, u: f64, period: f64) -> f64 {
        u - period * (u / period).round()
    }

    /// `(sn, cn, dn)` at argument `u`.
    pub fn sn_cn_dn(&self, u: f64) -> (f64, f64, f64) {
        if self.k == 0.0 {
            return (u.sin(), u.cos(), 1.0);
        }
        let u = self.reduce(u, 4.0 * self.quarter_period);
        let phi0 = self.amplitudes(u)[0];
        let (sn, cn) = phi0.sin_cos();
        let dn = (1.0 - self.k * self.k * sn * sn).sqrt();
        (sn, cn, dn)
    }

    /// Jacobi zeta function `Z(u) = Σ c_n sin φ_n`.
    pub fn zeta(&self, u: f64) -> f64 {
        if self.k == 0.0 {
            return 0.0;
        }
        let u = self.reduce(u, 2.0 * self.quarter_period);
        let phi = self.amplitudes(u);
        (1..phi.len()).map(|n| self.c[n] * phi[n].sin()).sum()
    }

    /// `(sn, cn, dn, Z)` from one Landen pass.
    pub fn sn_cn_dn_zeta(&self, u: f64) -> (f64, f64, f64, f64) {
        if self.k == 0.0 {
            return (u.sin(), u.cos(), 1.0, 0.0);
        }
        let u = self.reduce(u, 4.0 * self.quarter_period);
        let phi = self.amplitudes(u);
        let (sn, cn) = phi[0].sin_cos();
        let dn = (1.0 - self.k * self.k * sn * sn).sqrt();
        // sin φ_n (n ≥ 1) is 2K-periodic in u
        let z = (1..phi.len()).map(|n| self.c[n] * phi[n].sin()).sum();
        (sn, cn, dn, z)
    }
}

/// Simultaneous Jacobi elliptic functions `(sn, cn, dn)` for `0 ≤ k < 1`.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    if !u.is_finite() {
        return Err(domain("argument u", u, "finite reals"));
    }
    Ok(JacobiState::new(k)?.sn_cn_dn(u))
}

/// Jacobi zeta function `Z(u, k) = E(am u, k) - u E(k)/K(k)` for `0 < k < 1`.
pub fn jacobi_zeta(u: f64, k: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(domain("argument u", u, "finite reals"));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("modulus k", k, "(0, 1)"));
    }
    Ok(JacobiState::new(k)?.zeta(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circular_degeneration() {
        for &u in &[-2.0, 0.0, 0.4, 3.0, 10.0] {
            let (sn, cn, dn) = jacobi_sn_cn_dn(u, 0.0).unwrap();
            assert_abs_diff_eq!(sn, u.sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(cn, u.cos(), epsilon = 1e-15);
            assert_eq!(dn, 1.0);
        }
    }

    #[test]
    fn origin_values() {
        for &k in &[0.1, 0.5, 0.99] {
            let (sn, cn, dn) = jacobi_sn_cn_dn(0.0, k).unwrap();
            assert_abs_diff_eq!(sn, 0.0, epsilon = 1e-16);
            assert_abs_diff_eq!(cn, 1.0, epsilon = 1e-16);
            assert_abs_diff_eq!(dn, 1.0, epsilon = 1e-16);
        }
    }

    #[test]
    fn quarter_period_values() {
        let k = 0.5;
        let st = JacobiState::new(k).unwrap();
        let (sn, cn, dn) = st.sn_cn_dn(st.quarter_period());
        assert_abs_diff_eq!(sn, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(cn, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dn, complementary_modulus(k), epsilon = 1e-14);
    }

    #[test]
    fn zeta_zeros_and_oddness() {
        let k = 0.759;
        let st = JacobiState::new(k).unwrap();
        assert_abs_diff_eq!(st.zeta(0.0), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(st.zeta(st.quarter_period()), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(st.zeta(0.7), -st.zeta(-0.7), epsilon = 1e-15);
        let per = 2.0 * st.quarter_period();
        assert_abs_diff_eq!(st.zeta(0.7 + per), st.zeta(0.7), epsilon = 1e-14);
        assert!(jacobi_zeta(0.3, 0.0).is_err());
    }
}
