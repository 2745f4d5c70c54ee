use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Trapezoid mean of a `2π`-periodic function over `nodes` equispaced points.
pub fn periodic_mean(f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let h = TAU / nodes as f64;
    (0..nodes).map(|j| f(j as f64 * h)).sum::<f64>() / nodes as f64
}

/// Periodic trapezoid mean, doubling `start` nodes until two successive
/// results differ by less than `tol` or `max` nodes are exceeded.
pub fn periodic_mean_adaptive(
    f: impl Fn(f64) -> f64,
    start: usize,
    max: usize,
    tol: f64,
) -> Result<f64> {
    let mut n = start.max(2);
    let mut prev = periodic_mean(&f, n);
    while n < max {
        n *= 2;
        let next = periodic_mean(&f, n);
        if (next - prev).abs() <= tol * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence("periodic trapezoid rule"))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod 7/15 quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn gauss_kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> Result<f64> {
        let (value, err) = kronrod15(f, a, b);
        if err <= tol || (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            return Ok(value);
        }
        if depth >= 48 {
            return Err(Error::NonConvergence("Gauss-Kronrod quadrature"));
        }
        let m = 0.5 * (a + b);
        Ok(recurse(f, a, m, 0.5 * tol, depth + 1)? + recurse(f, m, b, 0.5 * tol, depth + 1)?)
    }
    recurse(&f, a, b, tol, 0)
}
