//! The six subcommands. Each returns the files it wants written.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use reskit_core::averaging::{
    find_simple_roots, GeneratingFamily, ResonanceCoefficients, ResonanceIndex, Stability,
    ROOT_SCAN_GRID,
};
use reskit_core::dynamics::{
    classify_portrait, fundamental_equilibria, melnikov_delta1, phase_point_of, sample_path,
    separatrix_gap, trace_full_system, AveragedModel, CycleLocation, Equilibrium, Escape,
    FullOptions, LoopGap, PhasePortrait, ScanTrajectory, SplitKind, Taxonomy, GAP_TOL,
};
use reskit_core::hamiltonian::{
    action_to_k, k_to_action, DomainKind, FrequencyJet, PerturbedSystem,
};
use reskit_core::pendulum::{
    pendulum_chart, pendulum_resonance_setup, PendulumEnergy, PendulumFamily,
    PendulumGeneratingFunction, PendulumParams,
};

use crate::config::{StartConfig, SystemSetup, Validated};
use crate::error::{CliError, CliResult};
use crate::format::{to_json, Cell, Table};

/// Output file name and contents.
pub type Output = (&'static str, String);

/// Parameter distance at which a configured `p₁` counts as the double-cycle value.
pub const DOUBLE_ROOT_MATCH: f64 = 1e-3;
/// Samples of the coefficient functions over one period.
const COEFFICIENT_SAMPLES: usize = 256;
/// Samples of the potential gap over one period.
const GAP_SAMPLES: usize = 256;

fn pendulum_only(cfg: &Validated, command: &str) -> CliResult<crate::config::PendulumSetup> {
    match &cfg.system {
        SystemSetup::Pendulum(p) => Ok(*p),
        SystemSetup::Harmonic(_) => Err(CliError::Config(format!(
            "`{command}` needs a phase-space system; `harmonic-synthetic` only defines averaged coefficients"
        ))),
    }
}

#[derive(Serialize)]
struct RootReport {
    action: f64,
    k: f64,
    slope: f64,
    stability: Stability,
}

#[derive(Serialize)]
struct DoubleRootReport {
    p1: f64,
    k: f64,
    action: f64,
    b2: f64,
}

#[derive(Serialize)]
struct GenfunReport {
    p1: f64,
    simple_roots: Vec<RootReport>,
    /// Present when `p1` is within the match distance of the double-cycle value.
    double_root: Option<DoubleRootReport>,
    double_cycle_level: DoubleRootReport,
}

pub fn genfun(cfg: &Validated) -> CliResult<Vec<Output>> {
    let p = pendulum_only(cfg, "genfun")?;
    let p1 = p.params.p1;
    let g = &cfg.raw.genfun;
    let ks: Vec<f64> = (0..g.points)
        .map(|j| g.k_min + (g.k_max - g.k_min) * j as f64 / (g.points - 1) as f64)
        .collect();
    let rows = ks
        .par_iter()
        .map(|&k| {
            let action = k_to_action(k)?;
            let v = PendulumFamily.values(p1, action)?;
            Ok([k, action, v.b0, v.b1, v.b2])
        })
        .collect::<reskit_core::Result<Vec<_>>>()?;
    let mut table = Table::new(&["k", "action", "b0", "b1", "b2"]);
    for r in &rows {
        table.nums(r);
    }

    let simple_roots = find_simple_roots(&PendulumGeneratingFunction { p1 }, ROOT_SCAN_GRID)?
        .into_iter()
        .map(|r| {
            Ok(RootReport {
                action: r.action,
                k: action_to_k(r.action)?,
                slope: r.slope,
                stability: r.stability,
            })
        })
        .collect::<reskit_core::Result<Vec<_>>>()?;
    let level = pendulum_resonance_setup(p.params.omega1)?;
    let reference = DoubleRootReport {
        p1: level.p1,
        k: level.k,
        action: level.action,
        b2: level.b2,
    };
    let double_root = ((p1 - level.p1).abs() <= DOUBLE_ROOT_MATCH).then(|| DoubleRootReport {
        p1: level.p1,
        k: level.k,
        action: level.action,
        b2: level.b2,
    });
    let report = GenfunReport {
        p1,
        simple_roots,
        double_root,
        double_cycle_level: reference,
    };
    Ok(vec![
        ("genfun.csv", table.into_string()),
        ("genfun.json", to_json(&report)),
    ])
}

#[derive(Serialize)]
struct ResonanceReport {
    system: String,
    /// Resolved pendulum parameters, with `"auto"` values filled in.
    parameters: Option<PendulumParams>,
    index: ResonanceIndex,
    target_frequency: Option<f64>,
    action: f64,
    k: Option<f64>,
    frequency: FrequencyJet,
    b0: f64,
    b1: f64,
    b2: f64,
    effective_b0: f64,
    effective_b1: f64,
    coincidence: bool,
    mu: f64,
    gamma1: f64,
    gamma2: f64,
    amplitude: f64,
}

fn resonance_report(
    cfg: &Validated,
    c: &ResonanceCoefficients,
    model: &AveragedModel,
) -> CliResult<ResonanceReport> {
    let (params, target, k) = match &cfg.system {
        SystemSetup::Pendulum(p) => (
            Some(p.params),
            Some(p.index.target_frequency(p.params.omega1, p.params.omega2)),
            Some(action_to_k(c.action)?),
        ),
        SystemSetup::Harmonic(_) => (None, None, None),
    };
    Ok(ResonanceReport {
        system: cfg.raw.system.clone(),
        parameters: params,
        index: c.index,
        target_frequency: target,
        action: c.action,
        k,
        frequency: c.frequency,
        b0: c.b0_val,
        b1: c.b1_val,
        b2: c.b2_val,
        effective_b0: c.effective_b0(),
        effective_b1: c.effective_b1(),
        coincidence: c.coincidence(),
        mu: c.mu,
        gamma1: c.gamma1,
        gamma2: c.gamma2,
        amplitude: model.amplitude(),
    })
}

pub fn resonance(cfg: &Validated) -> CliResult<Vec<Output>> {
    let c = cfg.coefficients()?;
    // The reduced coefficients do not depend on the form; the full form has
    // no preconditions beyond b1 ≠ 0.
    let model = AveragedModel::new(c.clone(), reskit_core::dynamics::ModelForm::Full)?;
    let (m, n) = model.reduced_coefficients();
    let mut table = Table::new(&[
        "v",
        "a_tilde",
        "p0_tilde",
        "q0",
        "p1_tilde",
        "q1",
        "sigma_tilde",
        "reduced_m",
        "reduced_n",
    ]);
    let period = model.period();
    for j in 0..COEFFICIENT_SAMPLES {
        let v = period * j as f64 / COEFFICIENT_SAMPLES as f64;
        table.nums(&[
            v,
            c.a_tilde.eval(v),
            c.p0_tilde.eval(v),
            c.q0.eval(v),
            c.p1_tilde.eval(v),
            c.q1.eval(v),
            c.sigma_tilde.eval(v),
            m.eval(v),
            n.eval(v),
        ]);
    }
    let report = resonance_report(cfg, &c, &model)?;
    Ok(vec![
        ("resonance.json", to_json(&report)),
        ("resonance_coefficients.csv", table.into_string()),
    ])
}

#[derive(Serialize)]
struct CycleReport {
    location: CycleLocation,
    stability: Stability,
    multiplier: f64,
    period: f64,
    anchor: [f64; 2],
}

#[derive(Serialize)]
struct MelnikovSummary {
    saddle_v0: f64,
    delta1: f64,
    classification: SplitKind,
}

#[derive(Serialize)]
struct PortraitReport {
    figure: Option<&'static str>,
    taxonomy: Taxonomy,
    amplitude: f64,
    equilibria: Vec<Equilibrium>,
    limit_cycles: Vec<CycleReport>,
    melnikov: Option<MelnikovSummary>,
    loop_gaps: Vec<LoopGap>,
    random_starts: usize,
    seed: u64,
}

fn random_trajectories(cfg: &Validated, model: &AveragedModel) -> CliResult<Vec<ScanTrajectory>> {
    let opts = cfg.raw.portrait.options();
    let amp = model.amplitude();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.raw.seed);
    let starts: Vec<[f64; 2]> = (0..cfg.raw.portrait.random_starts)
        .map(|_| {
            let v = rng.gen_range(0.0..model.period());
            let u = rng.gen_range(-opts.window..=opts.window) * amp;
            [v, u]
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
            let escape = escaped.then(|| {
                if points.last().map_or(0.0, |p| p[2]) > 0.0 {
                    Escape::Up
                } else {
                    Escape::Down
                }
            });
            Ok(ScanTrajectory {
                start,
                escape,
                points,
            })
        })
        .collect::<reskit_core::Result<Vec<_>>>()
        .map_err(Into::into)
}

fn portrait_report(cfg: &Validated, portrait: &PhasePortrait) -> PortraitReport {
    PortraitReport {
        figure: portrait.taxonomy.figure.map(|f| f.label()),
        taxonomy: portrait.taxonomy.clone(),
        amplitude: portrait.amplitude,
        equilibria: portrait.equilibria.clone(),
        limit_cycles: portrait
            .limit_cycles
            .iter()
            .map(|c| CycleReport {
                location: c.location,
                stability: c.stability,
                multiplier: c.multiplier,
                period: c.period,
                anchor: c.anchor,
            })
            .collect(),
        melnikov: portrait.melnikov.as_ref().map(|m| MelnikovSummary {
            saddle_v0: m.saddle_v0,
            delta1: m.delta1,
            classification: m.classification,
        }),
        loop_gaps: portrait.loop_gaps.clone(),
        random_starts: cfg.raw.portrait.random_starts,
        seed: cfg.raw.seed,
    }
}

pub fn portrait(cfg: &Validated) -> CliResult<Vec<Output>> {
    let model = cfg.model()?;
    let portrait = classify_portrait(&model, &cfg.raw.portrait.options())?;
    let extra = random_trajectories(cfg, &model)?;

    let mut traj = Table::new(&["trajectory", "tau", "v", "u"]);
    for (i, t) in portrait.trajectories.iter().chain(&extra).enumerate() {
        for p in &t.points {
            traj.row(&[
                Cell::Int(i as u64),
                Cell::Num(p[0]),
                Cell::Num(p[1]),
                Cell::Num(p[2]),
            ]);
        }
    }
    let mut sep = Table::new(&["saddle", "branch", "tau", "v", "u"]);
    for s in &portrait.separatrices {
        for p in &s.points {
            sep.row(&[
                Cell::Int(s.saddle as u64),
                Cell::Text(s.branch.label()),
                Cell::Num(p[0]),
                Cell::Num(p[1]),
                Cell::Num(p[2]),
            ]);
        }
    }
    let mut cycles = Table::new(&["cycle", "location", "stability", "index", "v", "u"]);
    for (i, c) in portrait.limit_cycles.iter().enumerate() {
        let location = match c.location {
            CycleLocation::Upper => "upper",
            CycleLocation::Lower => "lower",
            CycleLocation::Oscillatory => "oscillatory",
        };
        let stability = match c.stability {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
        };
        for (j, p) in c.points.iter().enumerate() {
            cycles.row(&[
                Cell::Int(i as u64),
                Cell::Text(location),
                Cell::Text(stability),
                Cell::Int(j as u64),
                Cell::Num(p[0]),
                Cell::Num(p[1]),
            ]);
        }
    }
    let report = portrait_report(cfg, &portrait);
    Ok(vec![
        ("portrait.json", to_json(&report)),
        ("trajectories.csv", traj.into_string()),
        ("separatrices.csv", sep.into_string()),
        ("limit_cycles.csv", cycles.into_string()),
    ])
}

#[derive(Serialize)]
struct MelnikovReport {
    saddle_v0: f64,
    delta1: f64,
    classification: SplitKind,
    upper_gap: LoopGap,
    lower_gap: LoopGap,
    /// `sign(Δ₁)` equals the sign of both measured gaps, or all three vanish.
    signs_agree: bool,
}

/// Sign agreement between the splitting integral and a measured gap.
pub fn signs_agree(delta1: f64, kind: SplitKind, gap: f64, amplitude: f64) -> bool {
    match kind {
        SplitKind::DoubleLoopBifurcation => gap.abs() < GAP_TOL * amplitude.max(1e-12),
        _ => delta1.signum() == gap.signum(),
    }
}

pub fn melnikov(cfg: &Validated) -> CliResult<Vec<Output>> {
    let model = cfg.model()?;
    let m = melnikov_delta1(&model)?;
    let upper = separatrix_gap(&model, true)?;
    let lower = separatrix_gap(&model, false)?;
    let amp = model.amplitude();
    let agree = [upper.gap, lower.gap]
        .iter()
        .all(|&g| signs_agree(m.delta1, m.classification, g, amp));
    let mut table = Table::new(&["w", "potential_gap"]);
    for j in 0..=GAP_SAMPLES {
        let w = model.period() * j as f64 / GAP_SAMPLES as f64;
        table.nums(&[w, m.potential_gap(w)]);
    }
    let report = MelnikovReport {
        saddle_v0: m.saddle_v0,
        delta1: m.delta1,
        classification: m.classification,
        upper_gap: upper,
        lower_gap: lower,
        signs_agree: agree,
    };
    Ok(vec![
        ("melnikov.json", to_json(&report)),
        ("potential_gap.csv", table.into_string()),
    ])
}

#[derive(Serialize)]
struct SimulateReport {
    start: [f64; 2],
    resonant_action: f64,
    t_end: f64,
    samples: usize,
    /// `max |I(t) − I(0)|`.
    max_action_change: f64,
    /// `max |I(t) − I_res|`.
    max_resonance_deviation: f64,
    /// `5√ε`.
    band: f64,
    within_band: bool,
    v_start: f64,
    v_end: f64,
    v_min: f64,
    v_max: f64,
    /// First time `|v − v(0)|` reaches `2π/n`.
    crossed_period_at: Option<f64>,
    /// Largest retreat of `v` against its net drift, up to the first
    /// period crossing (or over the whole run without one).
    max_backtrack: f64,
    /// `v` crossed a full period with no retreat larger than a quarter period.
    monotone: bool,
    left_cell_at: Option<f64>,
}

pub fn simulate(cfg: &Validated) -> CliResult<Vec<Output>> {
    let p = pendulum_only(cfg, "simulate")?;
    let sim = cfg.raw.simulate.as_ref().ok_or_else(|| {
        CliError::Config("`simulate` needs a `simulate` block with a start".into())
    })?;
    let c = cfg.coefficients()?;
    let chart = pendulum_chart();
    let eps = p.params.epsilon;
    let t_end = match sim.t_end {
        Some(t) => t,
        None if eps > 0.0 => 10.0 / eps,
        None => {
            return Err(CliError::Config(
                "simulate.t_end is required when epsilon = 0".into(),
            ))
        }
    };
    let (x0, y0) = match &sim.start {
        StartConfig::Phase { x, y } => (*x, *y),
        StartConfig::Averaged { v, u } => phase_point_of(&chart, &c, *v, *u)?,
        StartConfig::Band { factor } => {
            let model = cfg.model()?;
            phase_point_of(&chart, &c, 0.0, factor * model.amplitude())?
        }
        StartConfig::Equilibrium(kind) => {
            let model = cfg.model()?;
            let wanted = |e: &Equilibrium| match kind.as_str() {
                "stable" => e.kind.is_stable(),
                "saddle" => e.kind.is_saddle(),
                _ => false,
            };
            if kind != "stable" && kind != "saddle" {
                return Err(CliError::Config(format!(
                    "simulate.start.equilibrium must be \"stable\" or \"saddle\", got \"{kind}\""
                )));
            }
            let e = fundamental_equilibria(&model)
                .into_iter()
                .find(wanted)
                .ok_or_else(|| {
                    CliError::Core(reskit_core::Error::Precondition(format!(
                        "the averaged system has no {kind} equilibrium"
                    )))
                })?;
            phase_point_of(&chart, &c, e.v, e.u)?
        }
    };
    let sys = PerturbedSystem::new(
        PendulumEnergy,
        p.params.forcing(),
        p.params.omega1,
        p.params.omega2,
        eps,
        DomainKind::Cylinder,
    )?;
    let opts = FullOptions {
        t_end,
        sample_dt: sim.sample_dt,
        tol: sim.tol,
    };
    let trace = trace_full_system(&sys, &chart, p.index, x0, y0, &opts)?;
    let s = &trace.samples;

    let mut table = Table::new(&["t", "x", "y", "action", "theta", "v"]);
    for q in s {
        table.nums(&[q.t, q.x, q.y, q.action, q.theta, q.v]);
    }
    let first = s[0];
    let last = s[s.len() - 1];
    let max_action_change = s
        .iter()
        .map(|q| (q.action - first.action).abs())
        .fold(0.0, f64::max);
    let max_resonance_deviation = s
        .iter()
        .map(|q| (q.action - c.action).abs())
        .fold(0.0, f64::max);
    let band = 5.0 * eps.sqrt();
    let period = TAU / p.index.n as f64;
    let crossed_period_at = s
        .iter()
        .find(|q| (q.v - first.v).abs() >= period)
        .map(|q| q.t);
    let drift = s
        .iter()
        .take_while(|q| crossed_period_at.is_none_or(|t| q.t <= t))
        .collect::<Vec<_>>();
    let drift_end = drift[drift.len() - 1];
    let dir = if drift_end.v >= first.v { 1.0 } else { -1.0 };
    let mut best = dir * first.v;
    let mut max_backtrack: f64 = 0.0;
    for q in &drift {
        best = best.max(dir * q.v);
        max_backtrack = max_backtrack.max(best - dir * q.v);
    }
    let report = SimulateReport {
        start: [x0, y0],
        resonant_action: c.action,
        t_end,
        samples: s.len(),
        max_action_change,
        max_resonance_deviation,
        band,
        within_band: max_resonance_deviation <= band,
        v_start: first.v,
        v_end: last.v,
        v_min: s.iter().map(|q| q.v).fold(f64::INFINITY, f64::min),
        v_max: s.iter().map(|q| q.v).fold(f64::NEG_INFINITY, f64::max),
        crossed_period_at,
        max_backtrack,
        monotone: crossed_period_at.is_some() && max_backtrack < 0.25 * period,
        left_cell_at: trace.left_cell_at,
    };
    if let Some(t) = trace.left_cell_at {
        eprintln!("reskit: trajectory left the oscillation cell at t = {t}");
    }
    Ok(vec![
        ("simulate.json", to_json(&report)),
        ("trajectory.csv", table.into_string()),
    ])
}

pub fn sweep(cfg: &Validated) -> CliResult<Vec<Output>> {
    let sw = cfg
        .raw
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("`sweep` needs a `sweep` block".into()))?;
    let values = sw.grid()?;
    let opts = cfg.raw.portrait.options();
    let rows = values
        .iter()
        .map(|&x| {
            let run = cfg.with_value(&sw.parameter, x)?;
            let c = run.coefficients()?;
            let model = run.model()?;
            let k = match &run.system {
                SystemSetup::Pendulum(_) => action_to_k(c.action)?,
                SystemSetup::Harmonic(_) => f64::NAN,
            };
            let portrait = classify_portrait(&model, &opts)?;
            let delta1 = portrait.melnikov.as_ref().map_or(f64::NAN, |m| m.delta1);
            Ok((x, k, c, delta1, portrait))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(&[
        "value",
        "k_res",
        "b0",
        "b1",
        "b2",
        "delta1",
        "equilibria",
        "cycles",
        "passability",
        "figure",
    ]);
    for (x, k, c, delta1, portrait) in &rows {
        table.row(&[
            Cell::Num(*x),
            Cell::Num(*k),
            Cell::Num(c.b0_val),
            Cell::Num(c.b1_val),
            Cell::Num(c.b2_val),
            Cell::Num(*delta1),
            Cell::Int(portrait.equilibria.len() as u64),
            Cell::Int(portrait.limit_cycles.len() as u64),
            Cell::Text(portrait.taxonomy.passability.label()),
            Cell::Text(portrait.taxonomy.figure.map_or("none", |f| f.label())),
        ]);
    }
    Ok(vec![("sweep.csv", table.into_string())])
}
