use crate::error::{Error, Result};

/// Plain bisection on a sign-changing bracket, to absolute width `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NonConvergence(
            "bisection bracket has no sign change",
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Brent's method on a sign-changing bracket.
pub fn brent(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NonConvergence("Brent bracket has no sign change"));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::NonConvergence("Brent iteration"))
}

/// Newton's method for two equations with an explicit Jacobian.
///
/// Stops when the residual max-norm falls below `tol`.
pub fn newton2(
    f: impl Fn([f64; 2]) -> [f64; 2],
    jac: impl Fn([f64; 2]) -> [[f64; 2]; 2],
    x0: [f64; 2],
    tol: f64,
    max_iter: usize,
) -> Result<[f64; 2]> {
    let mut x = x0;
    for _ in 0..max_iter {
        let r = f(x);
        if !(r[0].is_finite() && r[1].is_finite()) {
            break;
        }
        if r[0].abs().max(r[1].abs()) < tol {
            return Ok(x);
        }
        let j = jac(x);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx0 = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let dx1 = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        x = [x[0] - dx0, x[1] - dx1];
    }
    let r = f(x);
    if r[0].abs().max(r[1].abs()) < tol {
        Ok(x)
    } else {
        Err(Error::NonConvergence("two-dimensional Newton iteration"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bracketing_solvers_agree() {
        let f = |x: f64| x.cos() - x;
        let a = bisect(f, 0.0, 1.0, 1e-14).unwrap();
        let b = brent(f, 0.0, 1.0, 1e-14).unwrap();
        assert_abs_diff_eq!(a, 0.739_085_133_215_160_6, epsilon = 1e-13);
        assert_abs_diff_eq!(b, a, epsilon = 1e-13);
        assert!(brent(f, 2.0, 3.0, 1e-12).is_err());
    }

    #[test]
    fn newton_on_circle_line() {
        let x = newton2(
            |[x, y]| [x * x + y * y - 1.0, x - y],
            |[x, y]| [[2.0 * x, 2.0 * y], [1.0, -1.0]],
            [1.0, 0.2],
            1e-14,
            50,
        )
        .unwrap();
        assert_abs_diff_eq!(x[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
    }
}
