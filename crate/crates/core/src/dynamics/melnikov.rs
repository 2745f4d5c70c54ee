use serde::Serialize;

use crate::averaging::PeriodicFn;
use crate::error::{Error, Result};
use crate::numerics::{brent, periodic_mean};

use super::equilibria::{fundamental_equilibria, Equilibrium};
use super::flow::{run_until, StopReason};
use super::model::{AveragedModel, ModelForm};

/// `|Δ₁|` below this counts as a persisting double loop.
pub const DELTA1_TOL: f64 = 1e-9;
/// Offset of separatrix shooting from the saddle along its eigenvectors.
pub const SEPARATRIX_OFFSET: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    SplitUp,
    SplitDown,
    DoubleLoopBifurcation,
}

#[derive(Debug, Clone, Serialize)]
pub struct MelnikovResult {
    pub saddle_v0: f64,
    pub delta1: f64,
    pub classification: SplitKind,
    #[serde(skip)]
    potential: PeriodicFn,
}

impl MelnikovResult {
    /// `V(v₀ + w) − V(v₀)` with `V′ = Ã`.
    pub fn potential_gap(&self, w: f64) -> f64 {
        self.potential.eval(self.saddle_v0 + w) - self.potential.eval(self.saddle_v0)
    }
}

pub fn split_kind(delta1: f64) -> SplitKind {
    if delta1.abs() < DELTA1_TOL {
        SplitKind::DoubleLoopBifurcation
    } else if delta1 > 0.0 {
        SplitKind::SplitUp
    } else {
        SplitKind::SplitDown
    }
}

/// Saddle of the leading-order system `u̇ = Ã`, `v̇ = b₁u` whose separatrices
/// bound the whole band: a zero of `Ã` with `b₁Ã′ > 0` at which `V/b₁` is
/// smallest.
pub fn leading_saddle(model: &AveragedModel) -> Result<f64> {
    let a = &model.coeffs.a_tilde;
    let b1 = model.b1();
    let period = model.period();
    let grid = 512;
    let mut best: Option<(f64, f64)> = None;
    for j in 0..grid {
        let (lo, hi) = (
            period * j as f64 / grid as f64,
            period * (j + 1) as f64 / grid as f64,
        );
        let (fa, fb) = (a.eval(lo), a.eval(hi));
        let v = if fa == 0.0 {
            lo
        } else if fb != 0.0 && fa.signum() != fb.signum() {
            brent(|v| a.eval(v), lo, hi, 1e-15)?
        } else {
            continue;
        };
        if b1 * a.eval_with_derivative(v).1 <= 0.0 {
            continue;
        }
        let level = model.potential().eval(v) / b1;
        if best.is_none_or(|(_, l)| level < l) {
            best = Some((v, level));
        }
    }
    let (v0, _) = best.ok_or(Error::NoSaddle)?;
    Ok(v0.rem_euclid(period))
}

/// Splitting `Δ₁ = (1/b₁)∫₀^{2π/n}[2b₁M(w+v₀)(V(w+v₀) − V(v₀)) + N(w+v₀)] dw`
/// of the separatrix loops of the reduced system.
pub fn melnikov_delta1(model: &AveragedModel) -> Result<MelnikovResult> {
    if model.form != ModelForm::Symmetric {
        return Err(Error::Precondition(
            "the splitting integral needs the symmetric form".into(),
        ));
    }
    if !model.divergence_free() {
        return Err(Error::Precondition(
            "the splitting integral needs a vanishing divergence coefficient".into(),
        ));
    }
    let v0 = leading_saddle(model)?;
    let b1 = model.b1();
    let potential = model.potential().clone();
    let period = model.period();
    let gap = |w: f64| potential.eval(v0 + w) - potential.eval(v0);
    let scale = model.potential_range().1 - model.potential_range().0;
    let nodes = 4096;
    for j in 0..nodes {
        if gap(period * j as f64 / nodes as f64) / b1 < -1e-9 * scale {
            return Err(Error::Topology(
                "the potential difference changes sign along the separatrix loop".into(),
            ));
        }
    }
    let (m, n) = model.reduced_coefficients();
    // the integrand is 2π/n-periodic; periodic_mean works on [0, 2π)
    let scaled = |s: f64| {
        let w = s / model.order() as f64;
        2.0 * b1 * m.eval(w + v0) * gap(w) + n.eval(w + v0)
    };
    let delta1 = period * periodic_mean(scaled, nodes) / b1;
    Ok(MelnikovResult {
        saddle_v0: v0,
        delta1,
        classification: split_kind(delta1),
        potential,
    })
}

/// Measured separation of the separatrices of one loop on the section
/// halfway between the saddle and its translate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LoopGap {
    pub saddle_v: f64,
    pub saddle_u: f64,
    /// `true` for the loop with `u > 0`.
    pub upper: bool,
    pub section_v: f64,
    pub u_unstable: f64,
    pub u_stable: f64,
    /// `u_unstable − u_stable`.
    pub gap: f64,
}

fn principal_saddle(model: &AveragedModel) -> Result<Equilibrium> {
    let sign = model.b1().signum();
    fundamental_equilibria(model)
        .into_iter()
        .filter(|e| e.kind.is_saddle())
        .min_by(|a, b| {
            let la = sign * model.potential().eval(a.v);
            let lb = sign * model.potential().eval(b.v);
            la.total_cmp(&lb)
        })
        .ok_or(Error::NoSaddle)
}

/// Eigenvector of `jac` for the real eigenvalue `lambda`, with `v`-component
/// of sign `dir`.
fn eigenvector(jac: [[f64; 2]; 2], lambda: f64, dir: f64) -> [f64; 2] {
    let e = if jac[0][1].abs() > 1e-300 {
        [jac[0][1], lambda - jac[0][0]]
    } else {
        [lambda - jac[1][1], jac[1][0]]
    };
    let norm = e[0].hypot(e[1]);
    let s = if e[0] * dir >= 0.0 { 1.0 } else { -1.0 };
    [s * e[0] / norm, s * e[1] / norm]
}

/// Shoots the unstable separatrix of the principal saddle and the stable
/// separatrix of its translate along the chosen loop and measures their
/// `u`-gap on the midway section.
pub fn separatrix_gap(model: &AveragedModel, upper: bool) -> Result<LoopGap> {
    let saddle = principal_saddle(model)?;
    let period = model.period();
    let dir = model.b1().signum() * if upper { 1.0 } else { -1.0 };
    let section = saddle.v + dir * 0.5 * period;
    let jac = model.jacobian(&[saddle.v, saddle.u]);
    let (grow, decay) = (saddle.eigenvalues[0][0], saddle.eigenvalues[1][0]);
    let escape = 20.0 * model.amplitude().max(1e-6) + saddle.u.abs();
    let horizon = 1e3 / grow.abs().min(decay.abs()).max(1e-6);

    let eu = eigenvector(jac, grow, dir);
    let start = [
        saddle.v + SEPARATRIX_OFFSET * eu[0],
        saddle.u + SEPARATRIX_OFFSET * eu[1],
    ];
    let out = run_until(model, start, horizon, |y| y[0] - section, escape)?;
    if out.reason != StopReason::Event {
        return Err(Error::Topology(
            "unstable separatrix does not reach the loop section".into(),
        ));
    }

    let target = saddle.v + dir * period;
    let es = eigenvector(jac, decay, -dir);
    let start = [
        target + SEPARATRIX_OFFSET * es[0],
        saddle.u + SEPARATRIX_OFFSET * es[1],
    ];
    let back = run_until(model, start, -horizon, |y| y[0] - section, escape)?;
    if back.reason != StopReason::Event {
        return Err(Error::Topology(
            "stable separatrix does not reach the loop section".into(),
        ));
    }
    Ok(LoopGap {
        saddle_v: saddle.v,
        saddle_u: saddle.u,
        upper,
        section_v: section,
        u_unstable: out.y[1],
        u_stable: back.y[1],
        gap: out.y[1] - back.y[1],
    })
}
