use crate::error::Result;
use crate::numerics::{Dopri5, Flow};

use super::model::AveragedModel;

/// Tolerance of averaged-flow integrations.
pub const AVERAGED_TOL: f64 = 1e-10;
/// Time tolerance of section crossings.
const CROSSING_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Event,
    Escaped,
    Horizon,
}

#[derive(Debug, Clone, Copy)]
pub struct Stop {
    pub t: f64,
    pub y: [f64; 2],
    pub reason: StopReason,
}

pub fn integrator() -> Dopri5 {
    Dopri5::new(AVERAGED_TOL, AVERAGED_TOL)
}

/// Integrates from `y0` towards `t_end` (either sign) until `event` changes
/// sign, `|u|` exceeds `escape`, or the horizon is reached.
pub fn run_until(
    model: &AveragedModel,
    y0: [f64; 2],
    t_end: f64,
    event: impl Fn(&[f64; 2]) -> f64,
    escape: f64,
) -> Result<Stop> {
    let mut stop: Option<Stop> = None;
    let out = integrator().integrate(
        |_, y| model.field(y),
        0.0,
        y0,
        t_end,
        |step| {
            if let Some((t, y)) = step.crossing(|_, y| event(y), CROSSING_TOL) {
                stop = Some(Stop {
                    t,
                    y,
                    reason: StopReason::Event,
                });
                return Flow::Stop;
            }
            if step.y1[1].abs() > escape || !step.y1[1].is_finite() {
                stop = Some(Stop {
                    t: step.t1,
                    y: step.y1,
                    reason: StopReason::Escaped,
                });
                return Flow::Stop;
            }
            Flow::Continue
        },
    )?;
    Ok(stop.unwrap_or(Stop {
        t: out.t,
        y: out.y,
        reason: StopReason::Horizon,
    }))
}

/// Samples `(τ, v, u)` every `dt` up to `t_end`, stopping after `|u|`
/// first exceeds `escape`.
pub fn sample_path(
    model: &AveragedModel,
    y0: [f64; 2],
    t_end: f64,
    dt: f64,
    escape: f64,
) -> Result<(Vec<[f64; 3]>, bool)> {
    let mut points = vec![[0.0, y0[0], y0[1]]];
    let dir = t_end.signum();
    let mut next = dt;
    let mut escaped = false;
    integrator().integrate(
        |_, y| model.field(y),
        0.0,
        y0,
        t_end,
        |step| {
            while next <= (step.t1 * dir) + 1e-12 {
                let t = dir * next;
                let y = step.interpolate(t);
                points.push([t, y[0], y[1]]);
                next += dt;
            }
            if step.y1[1].abs() > escape || !step.y1[1].is_finite() {
                if points.last().map(|p| p[0]) != Some(step.t1) {
                    points.push([step.t1, step.y1[0], step.y1[1]]);
                }
                escaped = true;
                return Flow::Stop;
            }
            Flow::Continue
        },
    )?;
    Ok((points, escaped))
}
