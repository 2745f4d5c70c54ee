use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{brent, newton2};

use super::genfun::{GenValues, GeneratingFunction};

/// Default number of scan nodes across the action interval.
pub const ROOT_SCAN_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

/// Simple zero of `B₀`, i.e. a rough limit cycle of the autonomous system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimpleRoot {
    pub action: f64,
    /// `B₁` at the root.
    pub slope: f64,
    pub stability: Stability,
}

fn scan_nodes(range: (f64, f64), grid: usize) -> Vec<f64> {
    let (lo, hi) = range;
    (0..grid)
        .map(|j| lo + (hi - lo) * (j as f64 + 0.5) / grid as f64)
        .collect()
}

/// All sign changes of `B₀` on a `grid`-node scan, refined by Brent's method.
pub fn find_simple_roots(gf: &dyn GeneratingFunction, grid: usize) -> Result<Vec<SimpleRoot>> {
    let nodes = scan_nodes(gf.action_range(), grid.max(2));
    let values = nodes
        .iter()
        .map(|&i| gf.b0(i))
        .collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for j in 0..nodes.len() - 1 {
        let (a, b) = (values[j], values[j + 1]);
        let root = if a == 0.0 {
            nodes[j]
        } else if a.signum() != b.signum() && b != 0.0 {
            brent(
                |i| gf.b0(i).unwrap_or(f64::NAN),
                nodes[j],
                nodes[j + 1],
                1e-14,
            )?
        } else {
            continue;
        };
        let slope = gf.values(root)?.b1;
        let stability = if slope < 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        roots.push(SimpleRoot {
            action: root,
            slope,
            stability,
        });
    }
    Ok(roots)
}

/// Generating functions depending on one scalar parameter.
pub trait GeneratingFamily: Sync {
    fn action_range(&self) -> (f64, f64);

    fn values(&self, parameter: f64, action: f64) -> Result<GenValues>;

    /// `true` if `B₀` and `B₁` are affine in the parameter.
    fn is_affine(&self) -> bool {
        false
    }
}

/// Parameter value and action of a double zero of `B₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleRoot {
    pub parameter: f64,
    pub action: f64,
    pub b2: f64,
}

/// Smallest `|B₂|` accepted as a nondegenerate double root.
const DEGENERACY_TOL: f64 = 1e-10;

/// Solves `B₀ = B₁ = 0` jointly in `(parameter, action)`.
///
/// Along a `grid`-node action scan the parameter is eliminated through
/// `B₀ = 0`; sign changes of `B₁` on that curve are refined by Brent's method
/// and polished by a two-dimensional Newton step.
pub fn find_double_root(
    family: &dyn GeneratingFamily,
    parameter_guess: f64,
    grid: usize,
) -> Result<Vec<DoubleRoot>> {
    let step = 1e-4 * (1.0 + parameter_guess.abs());
    // (values, ∂B₀/∂p, ∂B₁/∂p)
    let dp = |p: f64, i: f64| -> Result<(GenValues, f64, f64)> {
        let base = family.values(p, i)?;
        if family.is_affine() {
            let up = family.values(p + 1.0, i)?;
            return Ok((base, up.b0 - base.b0, up.b1 - base.b1));
        }
        let up = family.values(p + step, i)?;
        let down = family.values(p - step, i)?;
        Ok((
            base,
            (up.b0 - down.b0) / (2.0 * step),
            (up.b1 - down.b1) / (2.0 * step),
        ))
    };
    let eliminate = |i: f64, guess: f64| -> Result<f64> {
        let mut p = guess;
        for _ in 0..60 {
            let (v, d0, _) = dp(p, i)?;
            if d0 == 0.0 {
                return Err(Error::Degenerate(
                    "generating function independent of parameter".into(),
                ));
            }
            let next = p - v.b0 / d0;
            if (next - p).abs() <= 1e-14 * (1.0 + p.abs()) {
                return Ok(next);
            }
            p = next;
            if family.is_affine() {
                return Ok(p);
            }
        }
        Err(Error::NonConvergence("parameter elimination"))
    };

    let nodes = scan_nodes(family.action_range(), grid.max(2));
    let mut curve = Vec::with_capacity(nodes.len());
    let mut guess = parameter_guess;
    for &i in &nodes {
        match eliminate(i, guess) {
            Ok(p) if p.is_finite() => {
                guess = p;
                curve.push(Some((p, family.values(p, i)?.b1)));
            }
            _ => curve.push(None),
        }
    }

    let mut roots: Vec<DoubleRoot> = Vec::new();
    for j in 0..nodes.len() - 1 {
        let (Some((pa, ra)), Some((pb, rb))) = (curve[j], curve[j + 1]) else {
            continue;
        };
        if ra.signum() == rb.signum() || !(ra * rb).is_finite() {
            continue;
        }
        // a pole of the eliminated parameter also flips the sign of B₁
        if (pb - pa).abs() > 1e3 * (1.0 + pa.abs().min(pb.abs())) {
            continue;
        }
        let slope_on_curve = |i: f64| {
            let p = eliminate(i, pa).unwrap_or(f64::NAN);
            family.values(p, i).map(|v| v.b1).unwrap_or(f64::NAN)
        };
        let i0 = brent(slope_on_curve, nodes[j], nodes[j + 1], 1e-15)?;
        let p0 = eliminate(i0, pa)?;
        let polished = newton2(
            |[p, i]| match family.values(p, i) {
                Ok(v) => [v.b0, v.b1],
                Err(_) => [f64::NAN, f64::NAN],
            },
            |[p, i]| match (dp(p, i), family.values(p, i)) {
                (Ok((_, d0, d1)), Ok(v)) => [[d0, v.b1], [d1, 2.0 * v.b2]],
                _ => [[f64::NAN; 2]; 2],
            },
            [p0, i0],
            1e-13,
            30,
        )
        .unwrap_or([p0, i0]);
        let [p, i] = polished;
        let v = family.values(p, i)?;
        // a pole of the eliminated parameter leaves a large residual in B₁
        if !p.is_finite()
            || v.b1.abs() > 1e-8 * (1.0 + p.abs())
            || v.b0.abs() > 1e-8 * (1.0 + p.abs())
        {
            continue;
        }
        if v.b2.abs() < DEGENERACY_TOL {
            return Err(Error::Degenerate(format!(
                "root at action {i} has vanishing B2 (higher-order root)"
            )));
        }
        if roots.iter().all(|r| (r.action - i).abs() > 1e-9) {
            roots.push(DoubleRoot {
                parameter: p,
                action: i,
                b2: v.b2,
            });
        }
    }
    roots.sort_by(|a, b| {
        (a.parameter - parameter_guess)
            .abs()
            .total_cmp(&(b.parameter - parameter_guess).abs())
    });
    Ok(roots)
}
