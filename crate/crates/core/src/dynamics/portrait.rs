use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::cycles::{find_limit_cycles, CycleLocation, LimitCycle};
use super::equilibria::{find_equilibria, fundamental_equilibria, Equilibrium};
use super::flow::sample_path;
use super::melnikov::{
    melnikov_delta1, separatrix_gap, LoopGap, MelnikovResult, SplitKind, SEPARATRIX_OFFSET,
};
use super::model::{AveragedModel, ModelForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Passability {
    /// Every scanned trajectory stays in the window.
    Impassable,
    /// Captured and escaping trajectories coexist.
    PartlyPassable,
    /// No rest points: every trajectory rotates through.
    Passable,
}

impl Passability {
    pub fn label(self) -> &'static str {
        match self {
            Self::Impassable => "impassable",
            Self::PartlyPassable => "partly_passable",
            Self::Passable => "passable",
        }
    }
}

/// Qualitative phase-portrait families of the resonance zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FigureTag {
    #[serde(rename = "1a")]
    Fig1a,
    #[serde(rename = "1b")]
    Fig1b,
    #[serde(rename = "1c")]
    Fig1c,
    #[serde(rename = "2a")]
    Fig2a,
    #[serde(rename = "2b")]
    Fig2b,
    #[serde(rename = "2c")]
    Fig2c,
    #[serde(rename = "2d")]
    Fig2d,
    #[serde(rename = "3a")]
    Fig3a,
    #[serde(rename = "3b")]
    Fig3b,
    #[serde(rename = "3c")]
    Fig3c,
    #[serde(rename = "3d")]
    Fig3d,
    #[serde(rename = "3e")]
    Fig3e,
    #[serde(rename = "4a")]
    Fig4a,
    #[serde(rename = "4b")]
    Fig4b,
    #[serde(rename = "4c")]
    Fig4c,
    #[serde(rename = "4d")]
    Fig4d,
    #[serde(rename = "4e")]
    Fig4e,
}

impl FigureTag {
    pub fn label(self) -> &'static str {
        use FigureTag::*;
        match self {
            Fig1a => "1a",
            Fig1b => "1b",
            Fig1c => "1c",
            Fig2a => "2a",
            Fig2b => "2b",
            Fig2c => "2c",
            Fig2d => "2d",
            Fig3a => "3a",
            Fig3b => "3b",
            Fig3c => "3c",
            Fig3d => "3d",
            Fig3e => "3e",
            Fig4a => "4a",
            Fig4b => "4b",
            Fig4c => "4c",
            Fig4d => "4d",
            Fig4e => "4e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Escape {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ScanCounts {
    pub bounded: usize,
    pub escaped_up: usize,
    pub escaped_down: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Taxonomy {
    pub passability: Passability,
    /// A separatrix loop persists (splitting or measured gap vanishes).
    pub bifurcation: bool,
    pub figure: Option<FigureTag>,
    pub counts: ScanCounts,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTrajectory {
    pub start: [f64; 2],
    pub escape: Option<Escape>,
    /// `(τ, v, u)` samples.
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    UnstableForward,
    UnstableBackward,
    StableForward,
    StableBackward,
}

impl BranchKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::UnstableForward => "unstable_forward",
            Self::UnstableBackward => "unstable_backward",
            Self::StableForward => "stable_forward",
            Self::StableBackward => "stable_backward",
        }
    }
}

/// One separatrix branch; "forward"/"backward" is the sign of the
/// `v`-component of its initial offset.
#[derive(Debug, Clone, Serialize)]
pub struct Separatrix {
    pub saddle: usize,
    pub branch: BranchKind,
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PortraitOptions {
    /// Initial conditions per side of the scan grid.
    pub grid: usize,
    pub horizon: f64,
    /// Half-height of the scan window in units of the separatrix amplitude.
    pub window: f64,
    /// Escape threshold in units of the separatrix amplitude.
    pub escape: f64,
    pub sample_dt: f64,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        Self {
            grid: 20,
            horizon: 200.0,
            window: 1.5,
            escape: 3.0,
            sample_dt: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhasePortrait {
    pub amplitude: f64,
    pub equilibria: Vec<Equilibrium>,
    pub separatrices: Vec<Separatrix>,
    pub limit_cycles: Vec<LimitCycle>,
    pub trajectories: Vec<ScanTrajectory>,
    pub melnikov: Option<MelnikovResult>,
    pub loop_gaps: Vec<LoopGap>,
    pub taxonomy: Taxonomy,
}

/// Loop gaps below this fraction of the amplitude count as a persisting loop.
pub const GAP_TOL: f64 = 1e-6;
/// `|B₂|` below this counts as zero.
const B2_ZERO: f64 = 1e-12;

/// Runs the `grid × grid` scan over `v ∈ [0, 2π/n)`, `u ∈ [−w·A, w·A]`.
pub fn scan_trajectories(
    model: &AveragedModel,
    opts: &PortraitOptions,
) -> Result<Vec<ScanTrajectory>> {
    if opts.grid < 2 || !(opts.horizon > 0.0 && opts.sample_dt > 0.0) {
        return Err(Error::InvalidConfig(
            "scan grid must be at least 2 and horizon positive".into(),
        ));
    }
    let amp = model.amplitude();
    let period = model.period();
    let n = opts.grid;
    let starts: Vec<[f64; 2]> = (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                let v = period * i as f64 / n as f64;
                let u = opts.window * amp * (-1.0 + 2.0 * j as f64 / (n - 1) as f64);
                [v, u]
            })
        })
        .collect();
    starts
        .par_iter()
        .map(|&start| {
            let (points, escaped) = sample_path(
                model,
                start,
                opts.horizon,
                opts.sample_dt,
                opts.escape * amp,
            )?;
            let last = points.last().map(|p| p[2]).unwrap_or(start[1]);
            let escape = escaped.then_some(if last > 0.0 { Escape::Up } else { Escape::Down });
            Ok(ScanTrajectory {
                start,
                escape,
                points,
            })
        })
        .collect()
}

fn count(trajectories: &[ScanTrajectory]) -> ScanCounts {
    let mut c = ScanCounts::default();
    for t in trajectories {
        match t.escape {
            None => c.bounded += 1,
            Some(Escape::Up) => c.escaped_up += 1,
            Some(Escape::Down) => c.escaped_down += 1,
        }
    }
    c
}

/// Four branches per fundamental saddle, shot from an offset of `1e-7` along
/// the eigenvectors.
pub fn trace_separatrices(
    model: &AveragedModel,
    saddles: &[Equilibrium],
) -> Result<Vec<Separatrix>> {
    let escape = 3.0 * model.amplitude();
    let mut out = Vec::new();
    for (idx, s) in saddles.iter().enumerate() {
        let jac = model.jacobian(&[s.v, s.u]);
        for (lambda, unstable) in [(s.eigenvalues[0][0], true), (s.eigenvalues[1][0], false)] {
            let e = if jac[0][1].abs() > 1e-300 {
                [jac[0][1], lambda - jac[0][0]]
            } else {
                [lambda - jac[1][1], jac[1][0]]
            };
            let norm = e[0].hypot(e[1]);
            let e = if e[0] < 0.0 {
                [-e[0] / norm, -e[1] / norm]
            } else {
                [e[0] / norm, e[1] / norm]
            };
            let horizon = 40.0 / lambda.abs().max(1e-9);
            let t_end = if unstable { horizon } else { -horizon };
            for (sign, forward) in [(1.0, true), (-1.0, false)] {
                let start = [
                    s.v + sign * SEPARATRIX_OFFSET * e[0],
                    s.u + sign * SEPARATRIX_OFFSET * e[1],
                ];
                let (points, _) = sample_path(model, start, t_end, horizon / 2000.0, escape)?;
                let branch = match (unstable, forward) {
                    (true, true) => BranchKind::UnstableForward,
                    (true, false) => BranchKind::UnstableBackward,
                    (false, true) => BranchKind::StableForward,
                    (false, false) => BranchKind::StableBackward,
                };
                out.push(Separatrix {
                    saddle: idx,
                    branch,
                    points,
                });
            }
        }
    }
    Ok(out)
}

fn loop_gaps(model: &AveragedModel) -> Vec<LoopGap> {
    [true, false]
        .iter()
        .filter_map(|&upper| separatrix_gap(model, upper).ok())
        .collect()
}

fn near_zero_gap(gaps: &[LoopGap], upper: bool, amp: f64) -> bool {
    gaps.iter()
        .any(|g| g.upper == upper && g.gap.abs() < GAP_TOL * amp)
}

/// Equilibria, separatrices, limit cycles, the trajectory scan, and the
/// passability label with its figure family.
pub fn classify_portrait(model: &AveragedModel, opts: &PortraitOptions) -> Result<PhasePortrait> {
    let amp = model.amplitude();
    let equilibria = find_equilibria(model);
    let fundamental = fundamental_equilibria(model);
    let saddles: Vec<Equilibrium> = fundamental
        .iter()
        .copied()
        .filter(|e| e.kind.is_saddle())
        .collect();
    let separatrices = trace_separatrices(model, &saddles)?;
    let limit_cycles = find_limit_cycles(model, &fundamental)?;
    let trajectories = scan_trajectories(model, opts)?;
    let counts = count(&trajectories);
    let passability = if equilibria.is_empty() {
        Passability::Passable
    } else if counts.escaped_up + counts.escaped_down == 0 {
        Passability::Impassable
    } else {
        Passability::PartlyPassable
    };

    let melnikov = (model.form == ModelForm::Symmetric && model.divergence_free())
        .then(|| melnikov_delta1(model).ok())
        .flatten();
    let loop_gaps = if saddles.is_empty() {
        Vec::new()
    } else {
        loop_gaps(model)
    };
    let upper_loop = near_zero_gap(&loop_gaps, true, amp);
    let lower_loop = near_zero_gap(&loop_gaps, false, amp);

    let (figure, bifurcation) = match model.form {
        ModelForm::Symmetric if model.divergence_free() => match &melnikov {
            Some(m) => match m.classification {
                SplitKind::DoubleLoopBifurcation => (Some(FigureTag::Fig1b), true),
                SplitKind::SplitDown => (Some(FigureTag::Fig1a), false),
                SplitKind::SplitUp => (Some(FigureTag::Fig1c), false),
            },
            None => (None, false),
        },
        ModelForm::Symmetric => {
            if model.coeffs.b2_val.abs() < B2_ZERO {
                (Some(FigureTag::Fig2a), upper_loop || lower_loop)
            } else if upper_loop || lower_loop {
                (Some(FigureTag::Fig2c), true)
            } else {
                match passability {
                    Passability::Impassable => (Some(FigureTag::Fig2b), false),
                    Passability::PartlyPassable => (Some(FigureTag::Fig2d), false),
                    Passability::Passable => (None, false),
                }
            }
        }
        ModelForm::Full => {
            let constant_sign =
                model.coeffs.effective_b1().abs() > model.coeffs.sigma_tilde.max_abs();
            use FigureTag::*;
            let pick = |a, b, c, d, e| {
                if upper_loop {
                    (Some(b), true)
                } else if lower_loop {
                    (Some(d), true)
                } else {
                    match passability {
                        Passability::Impassable => (Some(c), false),
                        Passability::PartlyPassable if counts.escaped_up >= counts.escaped_down => {
                            (Some(a), false)
                        }
                        Passability::PartlyPassable => (Some(e), false),
                        Passability::Passable => (None, false),
                    }
                }
            };
            if constant_sign {
                pick(Fig3a, Fig3b, Fig3c, Fig3d, Fig3e)
            } else {
                pick(Fig4a, Fig4b, Fig4c, Fig4d, Fig4e)
            }
        }
    };

    Ok(PhasePortrait {
        amplitude: amp,
        equilibria,
        separatrices,
        limit_cycles,
        trajectories,
        melnikov,
        loop_gaps,
        taxonomy: Taxonomy {
            passability,
            bifurcation,
            figure,
            counts,
        },
    })
}

impl PhasePortrait {
    pub fn cycles_at(&self, location: CycleLocation) -> usize {
        self.limit_cycles
            .iter()
            .filter(|c| c.location == location)
            .count()
    }
}
