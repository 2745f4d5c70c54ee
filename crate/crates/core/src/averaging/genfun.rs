use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{
    action_angle_jets, ActionAngleChart, Hamiltonian, Jet, Perturbation, PerturbedSystem,
};

/// `B₀`, `B₁ = B₀′` and `B₂ = B₀″/2` at one action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenValues {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Poincaré–Pontryagin generating function along the action variable.
pub trait GeneratingFunction: Sync {
    fn action_range(&self) -> (f64, f64);

    fn values(&self, action: f64) -> Result<GenValues>;

    fn b0(&self, action: f64) -> Result<f64> {
        Ok(self.values(action)?.b0)
    }
}

/// Generating function obtained by averaging the action-rate field over the
/// angle and both forcing phases with periodic trapezoid rules.
pub struct QuadratureGeneratingFunction<'a, H, P> {
    sys: &'a PerturbedSystem<H, P>,
    chart: &'a dyn ActionAngleChart,
    pub tol: f64,
    pub max_angle_nodes: usize,
}

/// Builds the quadrature generating function of `sys` on `chart`.
pub fn generating_function<'a, H: Hamiltonian, P: Perturbation>(
    sys: &'a PerturbedSystem<H, P>,
    chart: &'a dyn ActionAngleChart,
) -> QuadratureGeneratingFunction<'a, H, P> {
    QuadratureGeneratingFunction {
        sys,
        chart,
        tol: 1e-12,
        max_angle_nodes: 4096,
    }
}

impl<H: Hamiltonian, P: Perturbation> QuadratureGeneratingFunction<'_, H, P> {
    fn average(&self, action: f64, angle_nodes: usize, torus_nodes: usize) -> Result<Jet> {
        let level = self.chart.level(action)?;
        let mut acc = Jet::from_re(0.0);
        for j in 0..angle_nodes {
            let point = level.point(TAU * j as f64 / angle_nodes as f64);
            for a in 0..torus_nodes {
                let t1 = TAU * a as f64 / torus_nodes as f64;
                for b in 0..torus_nodes {
                    let t2 = TAU * b as f64 / torus_nodes as f64;
                    acc += action_angle_jets(&self.sys.perturbation, &point, t1, t2).action_rate;
                }
            }
        }
        Ok(acc / (angle_nodes * torus_nodes * torus_nodes) as f64)
    }
}

impl<H: Hamiltonian, P: Perturbation> GeneratingFunction
    for QuadratureGeneratingFunction<'_, H, P>
{
    fn action_range(&self) -> (f64, f64) {
        self.chart.action_range()
    }

    fn values(&self, action: f64) -> Result<GenValues> {
        let (mut angle, mut torus) = (64usize, 8usize);
        let mut prev = self.average(action, angle, torus)?;
        while angle < self.max_angle_nodes {
            angle *= 2;
            torus = (torus * 2).min(64);
            let next = self.average(action, angle, torus)?;
            let change = (next.re - prev.re)
                .abs()
                .max((next.v1 - prev.v1).abs())
                .max((next.v2 - prev.v2).abs());
            let scale = 1.0 + next.re.abs().max(next.v1.abs()).max(next.v2.abs());
            if change <= self.tol * scale {
                return Ok(GenValues {
                    b0: next.re,
                    b1: next.v1,
                    b2: 0.5 * next.v2,
                });
            }
            prev = next;
        }
        Err(Error::NonConvergence("generating-function quadrature"))
    }
}
