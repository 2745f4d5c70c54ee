//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Bisection on a sign-changing bracket.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Fourth-order centred difference `f'(x)` with step `h`, Richardson-extrapolated once.
pub fn derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d =
        |h: f64| (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    d2 + (d2 - d1) / 15.0
}

/// Oracle `K(k)` by quadrature of the defining integral.
pub fn k_by_quadrature(k: f64) -> f64 {
    integrate(
        &|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(),
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-15,
    )
}

/// Oracle `E(φ, k)` by quadrature.
pub fn e_incomplete_by_quadrature(phi: f64, k: f64) -> f64 {
    integrate(
        &|t: f64| (1.0 - k * k * t.sin().powi(2)).sqrt(),
        0.0,
        phi,
        1e-15,
    )
}

/// Fourth-order centred second derivative, Richardson-extrapolated once.
pub fn second_derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| {
        (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
            / (12.0 * h * h)
    };
    let (d1, d2) = (d(h), d(0.5 * h));
    d2 + (d2 - d1) / 15.0
}

/// Fourth-order centred third derivative, Richardson-extrapolated once.
pub fn third_derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| {
        (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h)
            - 8.0 * f(x - 2.0 * h)
            + f(x - 3.0 * h))
            / (8.0 * h * h * h)
    };
    let (d1, d2) = (d(h), d(0.5 * h));
    d2 + (d2 - d1) / 15.0
}

/// Trapezoid mean over `[0, 2π)`.
pub fn orbit_mean(f: &dyn Fn(f64) -> f64, nodes: usize) -> f64 {
    let h = std::f64::consts::TAU / nodes as f64;
    (0..nodes).map(|j| f(j as f64 * h)).sum::<f64>() / nodes as f64
}

/// Classical fixed-step Runge–Kutta for a planar autonomous field; `t_end`
/// may be negative.
pub fn rk4(f: &dyn Fn(&[f64; 2]) -> [f64; 2], y0: [f64; 2], t_end: f64, steps: usize) -> [f64; 2] {
    let h = t_end / steps as f64;
    let add = |y: &[f64; 2], k: &[f64; 2], s: f64| [y[0] + s * k[0], y[1] + s * k[1]];
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&add(&y, &k1, 0.5 * h));
        let k3 = f(&add(&y, &k2, 0.5 * h));
        let k4 = f(&add(&y, &k3, h));
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
    }
    y
}
