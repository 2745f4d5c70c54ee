//! Dormand–Prince 5(4) with step-size control and fourth-order dense output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Observer verdict after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// State at any `t` between `t0` and `t1`.
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let s = if h == 0.0 { 1.0 } else { (t - self.t0) / h };
        let s1 = 1.0 - s;
        let r = &self.cont;
        std::array::from_fn(|i| {
            r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])))
        })
    }

    /// First time in the step where `g` changes sign, refined on the dense
    /// output by the Illinois variant of regula falsi to `tol` in time.
    pub fn crossing(&self, g: impl Fn(f64, &[f64; N]) -> f64, tol: f64) -> Option<(f64, [f64; N])> {
        let (mut ta, mut tb) = (self.t0, self.t1);
        let mut ga = g(ta, &self.y0);
        let mut gb = g(tb, &self.y1);
        if ga == 0.0 || ga.signum() == gb.signum() {
            return None;
        }
        let mut side = 0i8;
        for _ in 0..200 {
            let t = (ta * gb - tb * ga) / (gb - ga);
            let t = if t.is_finite() && (t - ta) * (t - tb) <= 0.0 {
                t
            } else {
                0.5 * (ta + tb)
            };
            let y = self.interpolate(t);
            let gt = g(t, &y);
            if gt == 0.0 || (tb - ta).abs() < tol {
                return Some((t, y));
            }
            if gt.signum() == gb.signum() {
                tb = t;
                gb = gt;
                if side == -1 {
                    ga *= 0.5;
                }
                side = -1;
            } else {
                ta = t;
                ga = gt;
                if side == 1 {
                    gb *= 0.5;
                }
                side = 1;
            }
            if (tb - ta).abs() < tol {
                let t = 0.5 * (ta + tb);
                return Some((t, self.interpolate(t)));
            }
        }
        let t = 0.5 * (ta + tb);
        Some((t, self.interpolate(t)))
    }
}

/// Final state of an integration run.
#[derive(Debug, Clone)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
    /// `true` if the observer requested the stop before `t_end`.
    pub stopped: bool,
}

/// Adaptive Dormand–Prince 5(4) integrator.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step magnitude; `f64::INFINITY` for none.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self::new(1e-10, 1e-10)
    }
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }

    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    fn error_norm<const N: usize>(&self, y0: &[f64; N], y1: &[f64; N], err: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs().max(y1[i].abs());
            acc += (err[i] / sc).powi(2);
        }
        (acc / N as f64).sqrt()
    }

    /// Integrates `y' = rhs(t, y)` from `t0` to `t_end` (either direction),
    /// handing every accepted step to `observer`.
    pub fn integrate<const N: usize>(
        &self,
        mut rhs: impl FnMut(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        mut observer: impl FnMut(&DenseStep<N>) -> Flow,
    ) -> Result<Outcome<N>> {
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        if span == 0.0 {
            return Ok(Outcome {
                t: t0,
                y: y0,
                steps: 0,
                stopped: false,
            });
        }
        let mut t = t0;
        let mut y = y0;
        let mut k1 = rhs(t, &y);
        let mut h = self
            .initial_step(&mut rhs, t, &y, &k1, dir)
            .min(span)
            .min(self.h_max);
        let mut steps = 0usize;
        let mut last_ratio = 1e-4f64;
        while (t_end - t) * dir > 0.0 {
            if steps >= self.max_steps {
                return Err(Error::NonConvergence("ODE step budget exhausted"));
            }
            let remaining = (t_end - t).abs();
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = h * dir;
            let stage = |y: &[f64; N], coeffs: &[(f64, &[f64; N])]| -> [f64; N] {
                std::array::from_fn(|i| {
                    y[i] + hs * coeffs.iter().map(|(c, k)| c * k[i]).sum::<f64>()
                })
            };
            let k2 = rhs(t + C2 * hs, &stage(&y, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * hs, &stage(&y, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(
                t + C4 * hs,
                &stage(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = rhs(
                t + C5 * hs,
                &stage(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + hs,
                &stage(
                    &y,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = stage(
                &y,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t_new = if last { t_end } else { t + hs };
            let k7 = rhs(t_new, &y_new);
            let err: [f64; N] = std::array::from_fn(|i| {
                hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            });
            let ratio = self.error_norm(&y, &y_new, &err);
            if !ratio.is_finite() {
                h *= 0.1;
                if h < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::NonConvergence("ODE step size underflow"));
                }
                continue;
            }
            if ratio <= 1.0 {
                let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
                let bspl: [f64; N] = std::array::from_fn(|i| hs * k1[i] - ydiff[i]);
                let cont = [
                    y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - hs * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        hs * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i])
                    }),
                ];
                let step = DenseStep {
                    t0: t,
                    t1: t_new,
                    y0: y,
                    y1: y_new,
                    cont,
                };
                t = t_new;
                y = y_new;
                k1 = k7;
                steps += 1;
                if observer(&step) == Flow::Stop {
                    return Ok(Outcome {
                        t,
                        y,
                        steps,
                        stopped: true,
                    });
                }
                // PI step-size control
                let fac = 0.9 * ratio.max(1e-10).powf(-0.17) * last_ratio.powf(0.04);
                last_ratio = ratio.max(1e-4);
                h = (h * fac.clamp(0.2, 5.0)).min(self.h_max);
            } else {
                h *= (0.9 * ratio.powf(-0.2)).clamp(0.1, 1.0);
                if h < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::NonConvergence("ODE step size underflow"));
                }
            }
        }
        Ok(Outcome {
            t,
            y,
            steps,
            stopped: false,
        })
    }

    fn initial_step<const N: usize>(
        &self,
        rhs: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
        t: f64,
        y: &[f64; N],
        f0: &[f64; N],
        dir: f64,
    ) -> f64 {
        let norm = |v: &[f64; N]| {
            (v.iter()
                .zip(y)
                .map(|(a, b)| (a / (self.atol + self.rtol * b.abs())).powi(2))
                .sum::<f64>()
                / N as f64)
                .sqrt()
        };
        let d0 = norm(y);
        let d1 = norm(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let y1: [f64; N] = std::array::from_fn(|i| y[i] + dir * h0 * f0[i]);
        let f1 = rhs(t + dir * h0, &y1);
        let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
        let d2 = norm(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn harmonic_oscillator_period() {
        let solver = Dopri5::new(1e-12, 1e-12);
        let out = solver
            .integrate(
                |_, y| [y[1], -y[0]],
                0.0,
                [1.0, 0.0],
                20.0 * std::f64::consts::PI,
                |_| Flow::Continue,
            )
            .unwrap();
        assert_abs_diff_eq!(out.y[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.y[1], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn backward_integration_reverses() {
        let solver = Dopri5::new(1e-12, 1e-12);
        let f = |_t: f64, y: &[f64; 1]| [y[0] * (1.0 - y[0])];
        let fwd = solver
            .integrate(f, 0.0, [0.1], 5.0, |_| Flow::Continue)
            .unwrap();
        let back = solver
            .integrate(f, 5.0, fwd.y, 0.0, |_| Flow::Continue)
            .unwrap();
        assert_abs_diff_eq!(back.y[0], 0.1, epsilon = 1e-10);
    }

    #[test]
    fn dense_output_and_crossing() {
        let solver = Dopri5::new(1e-10, 1e-10);
        let mut hit = None;
        solver
            .integrate(
                |_, y| [y[1], -y[0]],
                0.0,
                [1.0, 0.0],
                10.0,
                |step| {
                    let mid = 0.5 * (step.t0 + step.t1);
                    let y = step.interpolate(mid);
                    assert!((y[0] - mid.cos()).abs() < 1e-8);
                    if let Some((t, _)) = step.crossing(|_, y| y[0], 1e-13) {
                        hit = Some(t);
                        return Flow::Stop;
                    }
                    Flow::Continue
                },
            )
            .unwrap();
        assert_abs_diff_eq!(hit.unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-9);
    }
}
