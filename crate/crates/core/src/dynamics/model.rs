use serde::{Deserialize, Serialize};

use crate::averaging::{PeriodicFn, ResonanceCoefficients};
use crate::error::{Error, Result};

/// Which truncation of the averaged system to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelForm {
    /// Second-order system with detunings and the phase-rate corrections.
    Full,
    /// Reduced system at a double-cycle level, `B₀ = B₁ = 0`.
    Symmetric,
}

/// Relative size below which a coefficient function is treated as zero.
const ZERO_TOL: f64 = 1e-10;

/// Averaged system on the phase cylinder `{v mod 2π/n, u}` written as
/// `u̇ = c₀(v) + c₁(v) u + c₂(v) u²`, `v̇ = d₁(v) u + d₂ u² + d₃ u³`.
#[derive(Debug, Clone, Serialize)]
pub struct AveragedModel {
    pub coeffs: ResonanceCoefficients,
    pub form: ModelForm,
    #[serde(skip)]
    constant: PeriodicFn,
    #[serde(skip)]
    linear: PeriodicFn,
    #[serde(skip)]
    quadratic: PeriodicFn,
    #[serde(skip)]
    phase_linear: PeriodicFn,
    #[serde(skip)]
    phase_quadratic: f64,
    #[serde(skip)]
    phase_cubic: f64,
    #[serde(skip)]
    potential: PeriodicFn,
}

impl AveragedModel {
    pub fn new(coeffs: ResonanceCoefficients, form: ModelForm) -> Result<Self> {
        let c = &coeffs;
        let b1 = c.frequency.b1;
        if b1 == 0.0 || !b1.is_finite() {
            return Err(Error::Degenerate(
                "frequency derivative b1 vanishes at the resonant level".into(),
            ));
        }
        if form == ModelForm::Symmetric {
            if c.gamma1 != 0.0 || c.gamma2 != 0.0 {
                return Err(Error::Precondition(
                    "the symmetric form requires zero detunings gamma1 = gamma2 = 0".into(),
                ));
            }
            if !c.coincidence() {
                return Err(Error::Precondition(format!(
                    "the symmetric form requires B0 = B1 = 0 at the resonant level (B0 = {}, B1 = {})",
                    c.b0_val, c.b1_val
                )));
            }
        }
        let mu = c.mu;
        let (b2, b3) = (c.frequency.b2, c.frequency.b3);
        let (m, n) = Self::reduced_parts(c);
        let q0_prime = c.q0.derivative();
        let phase_correction = c.q1.add(&c.q0.scaled(-2.0 * b2 / b1));
        let (constant, linear, quadratic, phase_linear, phase_quadratic, phase_cubic) = match form {
            ModelForm::Full => (
                c.a_tilde
                    .add(&PeriodicFn::constant(c.order(), c.effective_b0()))
                    .add(&c.p0_tilde.product(&c.q0).scaled(-mu * mu / b1)),
                c.sigma_tilde
                    .add(&PeriodicFn::constant(c.order(), c.effective_b1()))
                    .scaled(mu),
                c.p1_tilde
                    .add(&PeriodicFn::constant(c.order(), c.b2_val))
                    .add(&q0_prime.scaled(b2 / b1))
                    .scaled(mu * mu),
                PeriodicFn::constant(c.order(), b1).add(&phase_correction.scaled(mu * mu)),
                mu * b2,
                mu * mu * b3,
            ),
            ModelForm::Symmetric => (
                c.a_tilde.add(&n.scaled(mu * mu / b1)),
                c.sigma_tilde.scaled(mu),
                m.scaled(mu * mu * b1),
                PeriodicFn::constant(c.order(), b1),
                0.0,
                0.0,
            ),
        };
        let potential = c.a_tilde.antiderivative();
        Ok(Self {
            coeffs,
            form,
            constant,
            linear,
            quadratic,
            phase_linear,
            phase_quadratic,
            phase_cubic,
            potential,
        })
    }

    /// `M` and `N` of the reduced system:
    /// `M = (1/b₁)[P̃₁ + Q₁′ + (b₂/b₁)(P̃₀ + σ̃) + 3(b₃/b₁)Ã] + B₂/b₁`,
    /// `N = −P̃₀Q₀ + (Q₁ − 2(b₂/b₁)Q₀)Ã`.
    fn reduced_parts(c: &ResonanceCoefficients) -> (PeriodicFn, PeriodicFn) {
        let (b1, b2, b3) = (c.frequency.b1, c.frequency.b2, c.frequency.b3);
        let m = c
            .p1_tilde
            .add(&c.q1.derivative())
            .add(&c.p0_tilde.add(&c.sigma_tilde).scaled(b2 / b1))
            .add(&c.a_tilde.scaled(3.0 * b3 / b1))
            .scaled(1.0 / b1)
            .add(&PeriodicFn::constant(c.order(), c.b2_val / b1));
        let n = c
            .p0_tilde
            .product(&c.q0)
            .scaled(-1.0)
            .add(&c.q1.add(&c.q0.scaled(-2.0 * b2 / b1)).product(&c.a_tilde));
        (m, n)
    }

    /// `(M, N)` of the reduced system.
    pub fn reduced_coefficients(&self) -> (PeriodicFn, PeriodicFn) {
        Self::reduced_parts(&self.coeffs)
    }

    pub fn order(&self) -> u32 {
        self.coeffs.order()
    }

    /// Least period `2π/n` in `v`.
    pub fn period(&self) -> f64 {
        self.coeffs.a_tilde.period()
    }

    pub fn mu(&self) -> f64 {
        self.coeffs.mu
    }

    pub fn b1(&self) -> f64 {
        self.coeffs.frequency.b1
    }

    /// Zero-mean antiderivative `V` of `Ã`.
    pub fn potential(&self) -> &PeriodicFn {
        &self.potential
    }

    /// `true` when `σ̃` vanishes identically.
    pub fn divergence_free(&self) -> bool {
        let scale = 1.0 + self.coeffs.a_tilde.oscillation_bound();
        self.coeffs.sigma_tilde.oscillation_bound() <= ZERO_TOL * scale
    }

    /// `(du/dτ, dv/dτ)` at `(v, u)`.
    pub fn rhs(&self, v: f64, u: f64) -> (f64, f64) {
        let [dv, du] = self.field(&[v, u]);
        (du, dv)
    }

    /// Vector field on the state `[v, u]`, returned as `[v̇, u̇]`.
    pub fn field(&self, state: &[f64; 2]) -> [f64; 2] {
        let [v, u] = *state;
        let du = self.constant.eval(v) + u * (self.linear.eval(v) + u * self.quadratic.eval(v));
        let dv =
            u * (self.phase_linear.eval(v) + u * (self.phase_quadratic + u * self.phase_cubic));
        [dv, du]
    }

    /// Jacobian of [`field`](Self::field): rows `v̇`, `u̇`; columns `v`, `u`.
    pub fn jacobian(&self, state: &[f64; 2]) -> [[f64; 2]; 2] {
        let [v, u] = *state;
        let (_, c0p) = self.constant.eval_with_derivative(v);
        let (c1, c1p) = self.linear.eval_with_derivative(v);
        let (c2, c2p) = self.quadratic.eval_with_derivative(v);
        let (d1, d1p) = self.phase_linear.eval_with_derivative(v);
        [
            [
                d1p * u,
                d1 + u * (2.0 * self.phase_quadratic + 3.0 * self.phase_cubic * u),
            ],
            [c0p + u * (c1p + u * c2p), c1 + 2.0 * c2 * u],
        ]
    }

    /// Half-width in `u` of the leading-order separatrix band,
    /// `sqrt(2 (max V − min V) / |b₁|)`.
    pub fn amplitude(&self) -> f64 {
        let (lo, hi) = self.potential_range();
        (2.0 * (hi - lo) / self.b1().abs()).sqrt()
    }

    /// Minimum and maximum of `V` over one period.
    pub fn potential_range(&self) -> (f64, f64) {
        let m = 1024;
        (0..m)
            .map(|j| self.potential.eval(self.period() * j as f64 / m as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            })
    }
}

/// `(du/dτ, dv/dτ)` of `model` at `(v, u)`.
pub fn averaged_rhs(model: &AveragedModel, v: f64, u: f64) -> (f64, f64) {
    model.rhs(v, u)
}
