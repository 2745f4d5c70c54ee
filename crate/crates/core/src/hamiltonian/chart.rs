use std::f64::consts::TAU;

use crate::error::{domain, Error, Result};

use super::profile::{fd_frequency_jet, FrequencyJet};
use super::Jet;

/// Position, momentum and their angle derivatives on one level, each carried
/// as a second-order jet in the action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub x: Jet,
    pub y: Jet,
    pub x_theta: Jet,
    pub y_theta: Jet,
}

impl ChartPoint {
    /// `(∂X/∂θ)(∂Y/∂I) − (∂X/∂I)(∂Y/∂θ)`.
    pub fn jacobian(&self) -> f64 {
        self.x_theta.re * self.y.v1 - self.x.v1 * self.y_theta.re
    }
}

/// One closed orbit of the chart, prepared for repeated angle evaluation.
pub trait ChartLevel: Send + Sync {
    fn point(&self, theta: f64) -> ChartPoint;
}

/// Action–angle transformation `x = X(I, θ)`, `y = Y(I, θ)` on a cell of
/// closed orbits with open action interval.
pub trait ActionAngleChart: Send + Sync {
    /// Open interval `(I_min, I_max)`.
    fn action_range(&self) -> (f64, f64);

    fn omega(&self, action: f64) -> Result<f64>;

    /// `ω` with `b₁ = ω′`, `b₂ = ω″/2`, `b₃ = ω‴/6`. The default uses
    /// Richardson-extrapolated central differences of [`omega`](Self::omega).
    fn frequency_jet(&self, action: f64) -> Result<FrequencyJet> {
        fd_frequency_jet(self, action)
    }

    fn level(&self, action: f64) -> Result<Box<dyn ChartLevel + '_>>;

    fn point(&self, action: f64, theta: f64) -> Result<ChartPoint> {
        Ok(self.level(action)?.point(theta))
    }

    /// `(I, θ)` of a phase point inside the cell, `θ ∈ [0, 2π)`.
    fn invert(&self, _x: f64, _y: f64) -> Result<(f64, f64)> {
        Err(Error::Precondition("chart has no inverse map".into()))
    }

    fn check_action(&self, action: f64) -> Result<()> {
        let (lo, hi) = self.action_range();
        if action > lo && action < hi {
            Ok(())
        } else {
            Err(domain("action I", action, "open chart interval"))
        }
    }
}

/// Largest canonicity defect `|X_θ Y_I − X_I Y_θ − 1|` over a product grid.
pub fn canonicity_defect(
    chart: &dyn ActionAngleChart,
    actions: &[f64],
    angles: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &i in actions {
        let level = chart.level(i)?;
        for j in 0..angles {
            let p = level.point(TAU * j as f64 / angles as f64);
            worst = worst.max((p.jacobian() - 1.0).abs());
        }
    }
    Ok(worst)
}

type Coordinate = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Frequency = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type Inverse = Box<dyn Fn(f64, f64) -> Option<(f64, f64)> + Send + Sync>;

/// Chart given by plain closures; all derivatives come from five-point
/// central differences.
pub struct NumericChart {
    x_of: Coordinate,
    y_of: Coordinate,
    omega_of: Frequency,
    inverse: Option<Inverse>,
    range: (f64, f64),
    angle_step: f64,
}

impl NumericChart {
    pub fn new(
        x_of: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        y_of: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        omega_of: impl Fn(f64) -> f64 + Send + Sync + 'static,
        range: (f64, f64),
    ) -> Result<Self> {
        if !(range.0 < range.1) {
            return Err(Error::InvalidConfig(format!(
                "empty action range ({}, {})",
                range.0, range.1
            )));
        }
        Ok(Self {
            x_of: Box::new(x_of),
            y_of: Box::new(y_of),
            omega_of: Box::new(omega_of),
            inverse: None,
            range,
            angle_step: 1e-3,
        })
    }

    pub fn with_inverse(
        mut self,
        inverse: impl Fn(f64, f64) -> Option<(f64, f64)> + Send + Sync + 'static,
    ) -> Self {
        self.inverse = Some(Box::new(inverse));
        self
    }

    fn action_step(&self, action: f64) -> f64 {
        let (lo, hi) = self.range;
        let h = 1e-3 * (hi - lo);
        h.min(0.2 * (action - lo)).min(0.2 * (hi - action))
    }
}

/// `(f, f′, f″)` from a five-point stencil of spacing `h` centred on `f[2]`.
pub(crate) fn stencil_jet(f: [f64; 5], h: f64) -> Jet {
    let d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    Jet::new(f[2], d1, d2)
}

struct NumericLevel<'a> {
    chart: &'a NumericChart,
    actions: [f64; 5],
    h: f64,
}

impl ChartLevel for NumericLevel<'_> {
    fn point(&self, theta: f64) -> ChartPoint {
        let c = self.chart;
        let d = c.angle_step;
        let angle_derivative = |f: &Coordinate, i: f64| {
            (f(i, theta - 2.0 * d) - 8.0 * f(i, theta - d) + 8.0 * f(i, theta + d)
                - f(i, theta + 2.0 * d))
                / (12.0 * d)
        };
        let x = self.actions.map(|i| (c.x_of)(i, theta));
        let y = self.actions.map(|i| (c.y_of)(i, theta));
        let xt = self.actions.map(|i| angle_derivative(&c.x_of, i));
        let yt = self.actions.map(|i| angle_derivative(&c.y_of, i));
        ChartPoint {
            x: stencil_jet(x, self.h),
            y: stencil_jet(y, self.h),
            x_theta: stencil_jet(xt, self.h),
            y_theta: stencil_jet(yt, self.h),
        }
    }
}

impl ActionAngleChart for NumericChart {
    fn action_range(&self) -> (f64, f64) {
        self.range
    }

    fn omega(&self, action: f64) -> Result<f64> {
        self.check_action(action)?;
        Ok((self.omega_of)(action))
    }

    fn level(&self, action: f64) -> Result<Box<dyn ChartLevel + '_>> {
        self.check_action(action)?;
        let h = self.action_step(action);
        let actions = [-2.0, -1.0, 0.0, 1.0, 2.0].map(|s| action + s * h);
        Ok(Box::new(NumericLevel {
            chart: self,
            actions,
            h,
        }))
    }

    fn invert(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let inv = self
            .inverse
            .as_ref()
            .ok_or_else(|| Error::Precondition("chart has no inverse map".into()))?;
        let (i, theta) = inv(x, y).ok_or_else(|| domain("phase point", x, "chart cell"))?;
        self.check_action(i)?;
        Ok((i, theta.rem_euclid(TAU)))
    }
}

/// Linear oscillator `H = ω₀ (x² + y²)/2` with `X = √(2I) sin θ`,
/// `Y = √(2I) cos θ`.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicChart {
    pub omega0: f64,
    pub max_action: f64,
}

struct HarmonicLevel {
    root: Jet,
}

impl ChartLevel for HarmonicLevel {
    fn point(&self, theta: f64) -> ChartPoint {
        let (s, c) = theta.sin_cos();
        ChartPoint {
            x: self.root * s,
            y: self.root * c,
            x_theta: self.root * c,
            y_theta: -self.root * s,
        }
    }
}

impl ActionAngleChart for HarmonicChart {
    fn action_range(&self) -> (f64, f64) {
        (0.0, self.max_action)
    }

    fn omega(&self, action: f64) -> Result<f64> {
        self.check_action(action)?;
        Ok(self.omega0)
    }

    fn frequency_jet(&self, action: f64) -> Result<FrequencyJet> {
        self.check_action(action)?;
        Ok(FrequencyJet {
            omega: self.omega0,
            b1: 0.0,
            b2: 0.0,
            b3: 0.0,
        })
    }

    fn level(&self, action: f64) -> Result<Box<dyn ChartLevel + '_>> {
        self.check_action(action)?;
        let r = (2.0 * action).sqrt();
        Ok(Box::new(HarmonicLevel {
            root: Jet::new(r, 1.0 / r, -1.0 / (r * r * r)),
        }))
    }

    fn invert(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let i = 0.5 * (x * x + y * y);
        self.check_action(i)?;
        Ok((i, x.atan2(y).rem_euclid(TAU)))
    }
}
