use std::f64::consts::TAU;

use num_dual::Dual64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{
    action_angle_jets, ActionAngleChart, ChartPoint, FrequencyJet, Hamiltonian, Jet, Perturbation,
    PerturbedSystem,
};

use super::periodic::PeriodicFn;
use super::resonance::ResonanceIndex;

/// Threshold on `|B₀|` and `|B₁|` below which the resonant level is taken to
/// coincide with the double-cycle level.
pub const COINCIDENCE_TOL: f64 = 1e-6;

/// Coefficient functions and scalars of the resonance-zone averaged system,
/// frozen at one resonant level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceCoefficients {
    pub index: ResonanceIndex,
    /// Resonant action `I_res`.
    pub action: f64,
    pub a_tilde: PeriodicFn,
    pub p0_tilde: PeriodicFn,
    pub q0: PeriodicFn,
    pub p1_tilde: PeriodicFn,
    pub q1: PeriodicFn,
    pub sigma_tilde: PeriodicFn,
    pub b0_val: f64,
    pub b1_val: f64,
    pub b2_val: f64,
    pub frequency: FrequencyJet,
    /// `μ = √ε`.
    pub mu: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl ResonanceCoefficients {
    pub fn order(&self) -> u32 {
        self.index.n
    }

    /// `B₀ + μγ₁`.
    pub fn effective_b0(&self) -> f64 {
        self.b0_val + self.mu * self.gamma1
    }

    /// `B₁ + μγ₂`.
    pub fn effective_b1(&self) -> f64 {
        self.b1_val + self.mu * self.gamma2
    }

    /// `|B₀|` and `|B₁|` both below [`COINCIDENCE_TOL`].
    pub fn coincidence(&self) -> bool {
        self.b0_val.abs() < COINCIDENCE_TOL && self.b1_val.abs() < COINCIDENCE_TOL
    }

    pub fn with_detuning(mut self, gamma1: f64, gamma2: f64) -> Self {
        self.gamma1 = gamma1;
        self.gamma2 = gamma2;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.mu = epsilon.sqrt();
        self
    }

    /// Replaces the second generating-function coefficient `B₂`.
    pub fn with_b2(mut self, b2: f64) -> Self {
        self.b2_val = b2;
        self
    }

    /// Action of the phase point `(v, u)` of the averaged system,
    /// `I = I_res + μu − μ² Q₀(v)/b₁`.
    pub fn action_of(&self, v: f64, u: f64) -> f64 {
        self.action + self.mu * u - self.mu * self.mu * self.q0.eval(v) / self.frequency.b1
    }

    /// Inverse of [`action_of`](Self::action_of) in `u`.
    pub fn scaled_deviation(&self, v: f64, action: f64) -> f64 {
        (action - self.action) / self.mu + self.mu * self.q0.eval(v) / self.frequency.b1
    }
}

/// Quadrature controls for [`resonance_coefficients`].
#[derive(Debug, Clone, Copy)]
pub struct CoefficientOptions {
    /// Samples of the slow phase per period `2π/n`.
    pub phase_samples: usize,
    pub start_nodes: usize,
    pub max_nodes: usize,
    /// Largest change allowed when the torus grid is doubled.
    pub tol: f64,
}

impl Default for CoefficientOptions {
    fn default() -> Self {
        Self {
            phase_samples: 32,
            start_nodes: 64,
            max_nodes: 1024,
            tol: 1e-10,
        }
    }
}

/// `[A, P₀, P₁, Q₀, Q₁]` at one slow phase.
type Sample = [f64; 5];

fn torus_average<P: Perturbation>(
    perturbation: &P,
    points: &[ChartPoint],
    idx: ResonanceIndex,
    nodes: usize,
) -> Sample {
    let n = idx.n as f64;
    let mut a = Jet::from_re(0.0);
    let mut q = Dual64::from_re(0.0);
    for j1 in 0..nodes {
        let t1 = TAU * n * j1 as f64 / nodes as f64;
        for j2 in 0..nodes {
            let t2 = TAU * n * j2 as f64 / nodes as f64;
            let l =
                (idx.m1 as i64 * j1 as i64 + idx.m2 as i64 * j2 as i64).rem_euclid(nodes as i64);
            let jets = action_angle_jets(perturbation, &points[l as usize], t1, t2);
            a += jets.action_rate;
            q += jets.phase_shift;
        }
    }
    let w = 1.0 / (nodes * nodes) as f64;
    [a.re * w, a.v1 * w, 0.5 * a.v2 * w, q.re * w, q.eps * w]
}

fn sample_phase<H: Hamiltonian, P: Perturbation>(
    sys: &PerturbedSystem<H, P>,
    chart: &dyn ActionAngleChart,
    idx: ResonanceIndex,
    action: f64,
    v: f64,
    nodes: usize,
) -> Result<Sample> {
    let level = chart.level(action)?;
    let points: Vec<ChartPoint> = (0..nodes)
        .map(|l| level.point(v + TAU * l as f64 / nodes as f64))
        .collect();
    Ok(torus_average(&sys.perturbation, &points, idx, nodes))
}

/// Evaluates `A`, `P₀`, `Q₀`, `P₁`, `Q₁` on the resonant level by
/// tensor-product trapezoid quadrature over `[0, 2πn)²` with
/// `θ = v + (m₁θ₁ + m₂θ₂)/n`, and splits them into means and mean-free parts.
pub fn resonance_coefficients<H: Hamiltonian, P: Perturbation>(
    sys: &PerturbedSystem<H, P>,
    chart: &dyn ActionAngleChart,
    idx: ResonanceIndex,
    action: f64,
    opts: CoefficientOptions,
) -> Result<ResonanceCoefficients> {
    chart.check_action(action)?;
    let period = TAU / idx.n as f64;
    let phases: Vec<f64> = (0..opts.phase_samples)
        .map(|j| period * j as f64 / opts.phase_samples as f64)
        .collect();
    let run = |nodes: usize| -> Result<Vec<Sample>> {
        phases
            .par_iter()
            .map(|&v| sample_phase(sys, chart, idx, action, v, nodes))
            .collect()
    };
    let mut nodes = opts.start_nodes.max(4);
    let mut prev = run(nodes)?;
    let samples = loop {
        if nodes >= opts.max_nodes {
            return Err(Error::NonConvergence(
                "resonance-coefficient torus quadrature",
            ));
        }
        nodes *= 2;
        let next = run(nodes)?;
        let change = prev
            .iter()
            .zip(&next)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        if change < opts.tol {
            break next;
        }
        prev = next;
    };
    let column = |k: usize| {
        let values: Vec<f64> = samples.iter().map(|s| s[k]).collect();
        PeriodicFn::from_samples(idx.n, &values)
    };
    let (a, p0, p1, q0, q1) = (column(0), column(1), column(2), column(3), column(4));
    let sigma_tilde = p0.tilde().add(&q0.derivative());
    Ok(ResonanceCoefficients {
        index: idx,
        action,
        a_tilde: a.tilde(),
        p0_tilde: p0.tilde(),
        q0,
        p1_tilde: p1.tilde(),
        q1,
        sigma_tilde,
        b0_val: a.mean,
        b1_val: p0.mean,
        b2_val: p1.mean,
        frequency: chart.frequency_jet(action)?,
        mu: sys.epsilon.sqrt(),
        gamma1: 0.0,
        gamma2: 0.0,
    })
}
