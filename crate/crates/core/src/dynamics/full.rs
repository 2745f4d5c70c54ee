use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::averaging::{ResonanceCoefficients, ResonanceIndex};
use crate::error::{Error, Result};
use crate::hamiltonian::{ActionAngleChart, Hamiltonian, Perturbation, PerturbedSystem};
use crate::numerics::{Dopri5, Flow};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FullOptions {
    pub t_end: f64,
    pub sample_dt: f64,
    pub tol: f64,
}

impl Default for FullOptions {
    fn default() -> Self {
        Self {
            t_end: 100.0,
            sample_dt: 0.1,
            tol: 1e-9,
        }
    }
}

/// One sample of the forced system with its action–angle reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FullSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub action: f64,
    pub theta: f64,
    /// Unwrapped slow phase `θ − (m₁θ₁ + m₂θ₂)/n`.
    pub v: f64,
}

/// Phase point `(x, y)` of the averaged state `(v, u)` at `t = 0`, where the
/// forcing phases vanish and `θ = v`.
pub fn phase_point_of(
    chart: &dyn ActionAngleChart,
    coeffs: &ResonanceCoefficients,
    v: f64,
    u: f64,
) -> Result<(f64, f64)> {
    let action = coeffs.action_of(v, u);
    let p = chart.point(action, v.rem_euclid(TAU))?;
    Ok((p.x.re, p.y.re))
}

fn wrap_near(value: f64, reference: f64) -> f64 {
    value + TAU * ((reference - value + PI) / TAU).floor()
}

/// Samples up to the horizon or up to the first sample outside the chart cell.
#[derive(Debug, Clone, Serialize)]
pub struct FullTrace {
    pub samples: Vec<FullSample>,
    /// Time of the first sample outside the cell.
    pub left_cell_at: Option<f64>,
}

/// Integrates the forced system from `(x₀, y₀)` and reads every sample back
/// through the chart. Leaving the chart cell is reported as
/// [`Error::ChartExit`] at the first sample outside it.
pub fn integrate_full_system<H: Hamiltonian, P: Perturbation>(
    sys: &PerturbedSystem<H, P>,
    chart: &dyn ActionAngleChart,
    idx: ResonanceIndex,
    x0: f64,
    y0: f64,
    opts: &FullOptions,
) -> Result<Vec<FullSample>> {
    let trace = trace_full_system(sys, chart, idx, x0, y0, opts)?;
    match trace.left_cell_at {
        Some(time) => Err(Error::ChartExit { time }),
        None => Ok(trace.samples),
    }
}

/// Like [`integrate_full_system`], but keeps the samples taken before the
/// trajectory left the cell.
pub fn trace_full_system<H: Hamiltonian, P: Perturbation>(
    sys: &PerturbedSystem<H, P>,
    chart: &dyn ActionAngleChart,
    idx: ResonanceIndex,
    x0: f64,
    y0: f64,
    opts: &FullOptions,
) -> Result<FullTrace> {
    if !(opts.t_end > 0.0 && opts.sample_dt > 0.0 && opts.tol > 0.0) {
        return Err(Error::InvalidConfig(
            "integration horizon, sample step and tolerance must be positive".into(),
        ));
    }
    let read = |t: f64, y: [f64; 2], prev_v: Option<f64>| -> Result<FullSample> {
        let (action, theta) = chart
            .invert(y[0], y[1])
            .map_err(|_| Error::ChartExit { time: t })?;
        let raw = theta - idx.forcing_phase(sys.omega1 * t, sys.omega2 * t);
        let v = match prev_v {
            Some(p) => wrap_near(raw, p),
            None => wrap_near(raw, 0.0),
        };
        Ok(FullSample {
            t,
            x: y[0],
            y: y[1],
            action,
            theta,
            v,
        })
    };
    let mut samples = vec![read(0.0, [x0, y0], None)?];
    let mut failure: Option<Error> = None;
    let mut k = 1usize;
    Dopri5::new(opts.tol, opts.tol).integrate(
        |t, y| sys.rhs(t, y),
        0.0,
        [x0, y0],
        opts.t_end,
        |step| {
            loop {
                let t = k as f64 * opts.sample_dt;
                if t > step.t1 + 1e-12 || t > opts.t_end + 1e-12 {
                    break;
                }
                let prev = samples.last().map(|s| s.v);
                match read(t, step.interpolate(t), prev) {
                    Ok(s) => samples.push(s),
                    Err(e) => {
                        failure = Some(e);
                        return Flow::Stop;
                    }
                }
                k += 1;
            }
            Flow::Continue
        },
    )?;
    match failure {
        Some(Error::ChartExit { time }) => Ok(FullTrace {
            samples,
            left_cell_at: Some(time),
        }),
        Some(e) => Err(e),
        None => Ok(FullTrace {
            samples,
            left_cell_at: None,
        }),
    }
}
