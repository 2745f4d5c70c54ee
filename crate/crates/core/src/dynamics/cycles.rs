use serde::Serialize;

use crate::averaging::Stability;
use crate::error::Result;
use crate::numerics::{brent, Dopri5, Flow};

use super::equilibria::Equilibrium;
use super::flow::integrator;
use super::model::AveragedModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleLocation {
    /// Rotational cycle with `u > 0`.
    Upper,
    /// Rotational cycle with `u < 0`.
    Lower,
    /// Cycle around a focus inside the oscillatory region.
    Oscillatory,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitCycle {
    pub location: CycleLocation,
    pub stability: Stability,
    /// Derivative of the return map at the fixed point.
    pub multiplier: f64,
    /// Return time.
    pub period: f64,
    /// Point of the cycle on its section.
    pub anchor: [f64; 2],
    /// Closed curve `(v, u)` sampled over one return.
    pub points: Vec<[f64; 2]>,
}

/// Rotational scan from this multiple of the separatrix height on `v = 0`
/// up to this multiple of the amplitude.
pub const ROTATIONAL_BAND: (f64, f64) = (1.02, 5.0);
const ROTATIONAL_SAMPLES: usize = 48;
const OSCILLATORY_SAMPLES: usize = 32;
const CLOSURE_TOL: f64 = 1e-6;
const CURVE_POINTS: usize = 256;
/// Return-map defects below this (relative to the section coordinate) are
/// indistinguishable from integration noise, as in reversible flows where
/// every rotational orbit closes.
const DEFECT_FLOOR: f64 = 1e-8;

/// A return map on a section, defined where the orbit comes back.
trait ReturnMap {
    fn start(&self, s: f64) -> [f64; 2];
    /// Section coordinate of the first return, and the return time.
    fn map(&self, s: f64) -> Option<(f64, f64)>;
}

struct Rotational<'a> {
    model: &'a AveragedModel,
    escape: f64,
}

impl ReturnMap for Rotational<'_> {
    fn start(&self, s: f64) -> [f64; 2] {
        [0.0, s]
    }

    fn map(&self, s: f64) -> Option<(f64, f64)> {
        let period = self.model.period();
        let rate = self.model.field(&[0.0, s])[0];
        if rate == 0.0 {
            return None;
        }
        let target = rate.signum() * period;
        let mut result = None;
        integrator()
            .integrate(
                |_, y| self.model.field(y),
                0.0,
                [0.0, s],
                50.0 * period / rate.abs(),
                |step| {
                    if let Some((t, y)) = step.crossing(|_, y| y[0] - target, 1e-13) {
                        result = Some((y[1], t));
                        return Flow::Stop;
                    }
                    // turning back or leaving the window
                    if step.y1[1] * s <= 0.0 || step.y1[1].abs() > self.escape {
                        return Flow::Stop;
                    }
                    Flow::Continue
                },
            )
            .ok()?;
        result
    }
}

struct AroundFocus<'a> {
    model: &'a AveragedModel,
    focus: [f64; 2],
    escape: f64,
}

impl ReturnMap for AroundFocus<'_> {
    fn start(&self, s: f64) -> [f64; 2] {
        [self.focus[0], self.focus[1] + s]
    }

    fn map(&self, s: f64) -> Option<(f64, f64)> {
        let y0 = self.start(s);
        let vf = self.focus[0];
        let dir = self.model.field(&y0)[0].signum();
        let period = self.model.period();
        let mut crossings = 0;
        let mut result = None;
        let scale = self.model.field(&y0)[0].abs().max(1e-12);
        let horizon = 200.0 * s.max(1e-9) / scale + 1e3;
        integrator()
            .integrate(
                |_, y| self.model.field(y),
                0.0,
                y0,
                horizon,
                |step| {
                    if (step.y1[0] - vf).abs() > period || step.y1[1].abs() > self.escape {
                        return Flow::Stop;
                    }
                    if let Some((t, y)) = step.crossing(|_, y| y[0] - vf, 1e-13) {
                        crossings += 1;
                        let moving = self.model.field(&y)[0].signum();
                        if crossings >= 2 && moving == dir && y[1] > self.focus[1] {
                            result = Some((y[1] - self.focus[1], t));
                            return Flow::Stop;
                        }
                        if crossings > 4 {
                            return Flow::Stop;
                        }
                    }
                    Flow::Continue
                },
            )
            .ok()?;
        result
    }
}

fn locate_fixed_points(map: &dyn ReturnMap, samples: &[f64]) -> Vec<(f64, f64, f64)> {
    let defect: Vec<Option<f64>> = samples
        .iter()
        .map(|&s| map.map(s).map(|(p, _)| p - s))
        .collect();
    let mut out = Vec::new();
    for j in 0..samples.len() - 1 {
        let (Some(a), Some(b)) = (defect[j], defect[j + 1]) else {
            continue;
        };
        if a.signum() == b.signum() || a == 0.0 {
            continue;
        }
        let floor = DEFECT_FLOOR * (1.0 + samples[j].abs().max(samples[j + 1].abs()));
        if a.abs().max(b.abs()) < floor {
            continue;
        }
        let f = |s: f64| map.map(s).map(|(p, _)| p - s).unwrap_or(f64::NAN);
        let Ok(s) = brent(
            f,
            samples[j],
            samples[j + 1],
            1e-13 * (1.0 + samples[j].abs()),
        ) else {
            continue;
        };
        let h = 1e-6 * (samples[j + 1] - samples[j]).abs().max(1e-9);
        let (Some((pp, _)), Some((pm, _)), Some((_, t))) =
            (map.map(s + h), map.map(s - h), map.map(s))
        else {
            continue;
        };
        out.push((s, (pp - pm) / (2.0 * h), t));
    }
    out
}

fn trace_cycle(
    model: &AveragedModel,
    anchor: [f64; 2],
    period: f64,
) -> Result<Option<Vec<[f64; 2]>>> {
    let dt = period / CURVE_POINTS as f64;
    let mut points = vec![anchor];
    let mut next = dt;
    let out = Dopri5::new(1e-11, 1e-11).integrate(
        |_, y| model.field(y),
        0.0,
        anchor,
        period,
        |step| {
            while next < step.t1 - 0.5 * dt && points.len() < CURVE_POINTS {
                points.push(step.interpolate(next));
                next += dt;
            }
            Flow::Continue
        },
    )?;
    let cell = model.period();
    let dv = (out.y[0] - anchor[0]) / cell;
    let closure = ((dv - dv.round()) * cell)
        .abs()
        .max((out.y[1] - anchor[1]).abs());
    points.push(out.y);
    Ok((closure < CLOSURE_TOL).then_some(points))
}

fn build(
    model: &AveragedModel,
    location: CycleLocation,
    anchor: [f64; 2],
    multiplier: f64,
    period: f64,
) -> Result<Option<LimitCycle>> {
    let Some(points) = trace_cycle(model, anchor, period)? else {
        return Ok(None);
    };
    let stability = if multiplier.abs() < 1.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Ok(Some(LimitCycle {
        location,
        stability,
        multiplier,
        period,
        anchor,
        points,
    }))
}

/// Rotational cycles from the return map on `v = 0` over the bands from
/// just above the separatrix to `±5A`, and cycles around foci from the return map on the ray
/// `{v = v_f, u > u_f}`.
pub fn find_limit_cycles(
    model: &AveragedModel,
    equilibria: &[Equilibrium],
) -> Result<Vec<LimitCycle>> {
    if model.mu() == 0.0 {
        return Ok(Vec::new());
    }
    let amp = model.amplitude().max(1e-6);
    let escape = 20.0 * amp;
    let mut cycles = Vec::new();
    let rot = Rotational { model, escape };
    let (lo, hi) = ROTATIONAL_BAND;
    let saddle_level = equilibria
        .iter()
        .filter(|e| e.kind.is_saddle())
        .map(|e| model.potential().eval(e.v))
        .collect::<Vec<_>>();
    // height of the leading-order separatrix over the section
    let floor = saddle_level
        .iter()
        .map(|&vs| 2.0 * (model.potential().eval(0.0) - vs) / model.b1())
        .fold(0.0, f64::max)
        .sqrt()
        .min(amp)
        .max(1e-3 * amp);
    for (location, sign) in [(CycleLocation::Upper, 1.0), (CycleLocation::Lower, -1.0)] {
        let samples: Vec<f64> = (0..ROTATIONAL_SAMPLES)
            .map(|j| {
                let x = j as f64 / (ROTATIONAL_SAMPLES - 1) as f64;
                sign * (lo * floor + (hi * amp - lo * floor) * x)
            })
            .collect();
        for (s, mult, t) in locate_fixed_points(&rot, &samples) {
            if let Some(c) = build(model, location, rot.start(s), mult, t)? {
                cycles.push(c);
            }
        }
    }
    for focus in equilibria.iter().filter(|e| {
        !e.kind.is_saddle()
            && e.kind != super::equilibria::EquilibriumKind::Center
            && e.v < model.period()
    }) {
        // reach of the oscillatory region along the ray
        let reach = saddle_level
            .iter()
            .map(|&vs| 2.0 * (model.potential().eval(focus.v) - vs) / model.b1())
            .filter(|r| *r > 0.0)
            .fold(f64::INFINITY, f64::min);
        let reach = if reach.is_finite() { reach.sqrt() } else { amp };
        let map = AroundFocus {
            model,
            focus: [focus.v, focus.u],
            escape,
        };
        let samples: Vec<f64> = (0..OSCILLATORY_SAMPLES)
            .map(|j| reach * (0.02 + 0.96 * j as f64 / (OSCILLATORY_SAMPLES - 1) as f64))
            .collect();
        for (s, mult, t) in locate_fixed_points(&map, &samples) {
            if let Some(c) = build(model, CycleLocation::Oscillatory, map.start(s), mult, t)? {
                cycles.push(c);
            }
        }
    }
    Ok(cycles)
}
