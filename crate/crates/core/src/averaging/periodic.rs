use std::f64::consts::TAU;

use serde::Serialize;

/// Real trigonometric polynomial in `n·v`:
/// `mean + Σ_h (cos[h−1] cos(h n v) + sin[h−1] sin(h n v))`, with least
/// period `2π/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicFn {
    pub order: u32,
    pub mean: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl PeriodicFn {
    pub fn zero(order: u32) -> Self {
        Self::constant(order, 0.0)
    }

    pub fn constant(order: u32, value: f64) -> Self {
        Self {
            order,
            mean: value,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// `c·cos(n v) + s·sin(n v)`.
    pub fn first_harmonic(order: u32, c: f64, s: f64) -> Self {
        Self {
            order,
            mean: 0.0,
            cos: vec![c],
            sin: vec![s],
        }
    }

    /// Interpolates equispaced samples `v_j = (2π/n)·j/M`, `j < M`, keeping
    /// harmonics strictly below the Nyquist index.
    pub fn from_samples(order: u32, samples: &[f64]) -> Self {
        let m = samples.len();
        let harmonics = m.saturating_sub(1) / 2;
        let mean = samples.iter().sum::<f64>() / m as f64;
        let mut cos = vec![0.0; harmonics];
        let mut sin = vec![0.0; harmonics];
        for h in 1..=harmonics {
            let (mut c, mut s) = (0.0, 0.0);
            for (j, &f) in samples.iter().enumerate() {
                let (sj, cj) = (TAU * (h * j) as f64 / m as f64).sin_cos();
                c += f * cj;
                s += f * sj;
            }
            cos[h - 1] = 2.0 * c / m as f64;
            sin[h - 1] = 2.0 * s / m as f64;
        }
        Self {
            order,
            mean,
            cos,
            sin,
        }
    }

    pub fn period(&self) -> f64 {
        TAU / self.order as f64
    }

    pub fn harmonics(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn coef(v: &[f64], h: usize) -> f64 {
        v.get(h).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, v: f64) -> f64 {
        let base = self.order as f64 * v;
        let mut acc = self.mean;
        for h in 0..self.harmonics() {
            let (s, c) = ((h + 1) as f64 * base).sin_cos();
            acc += Self::coef(&self.cos, h) * c + Self::coef(&self.sin, h) * s;
        }
        acc
    }

    /// Value and first derivative together.
    pub fn eval_with_derivative(&self, v: f64) -> (f64, f64) {
        let n = self.order as f64;
        let base = n * v;
        let (mut f, mut df) = (self.mean, 0.0);
        for h in 0..self.harmonics() {
            let w = (h + 1) as f64;
            let (s, c) = (w * base).sin_cos();
            let (a, b) = (Self::coef(&self.cos, h), Self::coef(&self.sin, h));
            f += a * c + b * s;
            df += w * n * (b * c - a * s);
        }
        (f, df)
    }

    pub fn derivative(&self) -> Self {
        let n = self.order as f64;
        let k = self.harmonics();
        let mut cos = vec![0.0; k];
        let mut sin = vec![0.0; k];
        for h in 0..k {
            let w = (h + 1) as f64 * n;
            cos[h] = w * Self::coef(&self.sin, h);
            sin[h] = -w * Self::coef(&self.cos, h);
        }
        Self {
            order: self.order,
            mean: 0.0,
            cos,
            sin,
        }
    }

    /// Zero-mean antiderivative of the mean-free part.
    pub fn antiderivative(&self) -> Self {
        let n = self.order as f64;
        let k = self.harmonics();
        let mut cos = vec![0.0; k];
        let mut sin = vec![0.0; k];
        for h in 0..k {
            let w = (h + 1) as f64 * n;
            cos[h] = -Self::coef(&self.sin, h) / w;
            sin[h] = Self::coef(&self.cos, h) / w;
        }
        Self {
            order: self.order,
            mean: 0.0,
            cos,
            sin,
        }
    }

    pub fn tilde(&self) -> Self {
        Self {
            mean: 0.0,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            order: self.order,
            mean: self.mean * factor,
            cos: self.cos.iter().map(|c| c * factor).collect(),
            sin: self.sin.iter().map(|s| s * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.order, other.order,
            "adding functions of different period"
        );
        let k = self.harmonics().max(other.harmonics());
        Self {
            order: self.order,
            mean: self.mean + other.mean,
            cos: (0..k)
                .map(|h| Self::coef(&self.cos, h) + Self::coef(&other.cos, h))
                .collect(),
            sin: (0..k)
                .map(|h| Self::coef(&self.sin, h) + Self::coef(&other.sin, h))
                .collect(),
        }
    }

    /// Pointwise product, exact up to rounding.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(
            self.order, other.order,
            "multiplying functions of different period"
        );
        let m = 2 * (self.harmonics() + other.harmonics()) + 2;
        let period = self.period();
        let samples: Vec<f64> = (0..m)
            .map(|j| {
                let v = period * j as f64 / m as f64;
                self.eval(v) * other.eval(v)
            })
            .collect();
        Self::from_samples(self.order, &samples)
    }

    /// Sum of absolute coefficients of the mean-free part, an upper bound of
    /// `max |f − mean|`.
    pub fn oscillation_bound(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|c| c.abs()).sum()
    }

    /// Largest `|f|` on a fine sample grid.
    pub fn max_abs(&self) -> f64 {
        let m = 64 * self.harmonics().max(1);
        (0..m)
            .map(|j| self.eval(self.period() * j as f64 / m as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Splits a periodic function of least period `2π/order` into its mean and
/// mean-free part, resolving harmonics below `samples/2`.
pub fn mean_free_decompose(
    f: impl Fn(f64) -> f64,
    order: u32,
    samples: usize,
) -> (f64, PeriodicFn) {
    let period = TAU / order as f64;
    let values: Vec<f64> = (0..samples)
        .map(|j| f(period * j as f64 / samples as f64))
        .collect();
    let full = PeriodicFn::from_samples(order, &values);
    (full.mean, full.tilde())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn decompose_harmonic_and_constant() {
        let (m, t) = mean_free_decompose(|v| (3.0 * v).cos(), 3, 16);
        assert_abs_diff_eq!(m, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.eval(0.37), (3.0 * 0.37f64).cos(), epsilon = 1e-14);
        let (m, t) = mean_free_decompose(|_| 2.5, 3, 16);
        assert_abs_diff_eq!(m, 2.5, epsilon = 1e-15);
        assert!(t.max_abs() < 1e-13);
    }

    #[test]
    fn calculus_on_polynomials() {
        let f = PeriodicFn {
            order: 2,
            mean: 0.5,
            cos: vec![1.0, -0.25],
            sin: vec![0.3, 0.0],
        };
        let v = 0.81;
        let h = 1e-6;
        let fd = (f.eval(v + h) - f.eval(v - h)) / (2.0 * h);
        assert_abs_diff_eq!(f.derivative().eval(v), fd, epsilon = 1e-8);
        assert_abs_diff_eq!(f.eval_with_derivative(v).1, fd, epsilon = 1e-8);
        let anti = f.antiderivative();
        assert_abs_diff_eq!(
            anti.derivative().eval(v),
            f.tilde().eval(v),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(f.eval(v + f.period()), f.eval(v), epsilon = 1e-14);
        let g = PeriodicFn::first_harmonic(2, 0.4, -1.1);
        assert_abs_diff_eq!(
            f.product(&g).eval(v),
            f.eval(v) * g.eval(v),
            epsilon = 1e-14
        );
    }
}
