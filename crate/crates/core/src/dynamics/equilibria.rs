use std::f64::consts::TAU;

use serde::Serialize;

use crate::numerics::newton2;

use super::model::AveragedModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Center,
    Saddle,
    StableFocus,
    UnstableFocus,
    StableNode,
    UnstableNode,
}

impl EquilibriumKind {
    pub fn is_saddle(self) -> bool {
        self == Self::Saddle
    }

    pub fn is_stable(self) -> bool {
        matches!(self, Self::StableFocus | Self::StableNode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    pub v: f64,
    pub u: f64,
    pub kind: EquilibriumKind,
    /// `[re, im]` of both Jacobian eigenvalues, larger real part first.
    pub eigenvalues: [[f64; 2]; 2],
}

const SEED_V: usize = 64;
const SEED_U: usize = 32;
const RESIDUAL_TOL: f64 = 1e-10;
const MERGE_TOL: f64 = 1e-7;
/// `|tr| ≤ CENTER_TOL · sqrt(det)` counts as a center.
const CENTER_TOL: f64 = 1e-9;

/// Classifies a rest point from the Jacobian trace and determinant.
pub fn classify(jac: [[f64; 2]; 2]) -> (EquilibriumKind, [[f64; 2]; 2]) {
    let tr = jac[0][0] + jac[1][1];
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let disc = tr * tr - 4.0 * det;
    let eig = if disc >= 0.0 {
        let r = disc.sqrt();
        [[0.5 * (tr + r), 0.0], [0.5 * (tr - r), 0.0]]
    } else {
        let r = (-disc).sqrt();
        [[0.5 * tr, 0.5 * r], [0.5 * tr, -0.5 * r]]
    };
    let kind = if det < 0.0 {
        EquilibriumKind::Saddle
    } else if tr.abs() <= CENTER_TOL * det.sqrt() {
        EquilibriumKind::Center
    } else {
        match (tr < 0.0, disc < 0.0) {
            (true, true) => EquilibriumKind::StableFocus,
            (true, false) => EquilibriumKind::StableNode,
            (false, true) => EquilibriumKind::UnstableFocus,
            (false, false) => EquilibriumKind::UnstableNode,
        }
    };
    (kind, eig)
}

fn circular_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Rest points in one fundamental cell `v ∈ [0, 2π/n)`, sorted by `v`.
pub fn fundamental_equilibria(model: &AveragedModel) -> Vec<Equilibrium> {
    let period = model.period();
    let span = 2.0 * model.amplitude().max(1e-3);
    let mut found: Vec<Equilibrium> = Vec::new();
    for i in 0..SEED_V {
        for j in 0..SEED_U {
            let v0 = period * (i as f64 + 0.5) / SEED_V as f64;
            let u0 = -span + 2.0 * span * (j as f64 + 0.5) / SEED_U as f64;
            let Ok([v, u]) = newton2(
                |x| model.field(&x),
                |x| model.jacobian(&x),
                [v0, u0],
                RESIDUAL_TOL,
                50,
            ) else {
                continue;
            };
            if !(v.is_finite() && u.abs() <= 5.0 * span) {
                continue;
            }
            let v = v.rem_euclid(period);
            let v = if period - v < 1e-14 { 0.0 } else { v };
            if found
                .iter()
                .any(|e| circular_gap(e.v, v, period) < MERGE_TOL && (e.u - u).abs() < MERGE_TOL)
            {
                continue;
            }
            let (kind, eigenvalues) = classify(model.jacobian(&[v, u]));
            found.push(Equilibrium {
                v,
                u,
                kind,
                eigenvalues,
            });
        }
    }
    found.sort_by(|a, b| a.v.total_cmp(&b.v));
    found
}

/// All rest points on the cylinder `v ∈ [0, 2π)`: the fundamental ones and
/// their `n − 1` translates.
pub fn find_equilibria(model: &AveragedModel) -> Vec<Equilibrium> {
    let base = fundamental_equilibria(model);
    let period = model.period();
    let mut all: Vec<Equilibrium> = (0..model.order())
        .flat_map(|j| {
            base.iter().map(move |e| Equilibrium {
                v: e.v + period * j as f64,
                ..*e
            })
        })
        .filter(|e| e.v < TAU)
        .collect();
    all.sort_by(|a, b| a.v.total_cmp(&b.v));
    all
}
