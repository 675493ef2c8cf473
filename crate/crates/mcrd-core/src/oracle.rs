//! Independent reference implementations used to cross-check the fast paths:
//! adaptive Simpson quadrature, dense sign scans with plain bisection, RK4
//! shooting for the stationary ODE, central differences, and Schur-based
//! eigenvalues of a 3x3 matrix. Nothing here shares code with the routines it
//! verifies; keep it that way.

use crate::error::{Error, Result};
use nalgebra::Matrix3;
use num_complex::Complex64;

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn integrate_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Plain bisection, independent of the production hybrid solver.
pub fn bisect_plain<F>(f: &F, mut lo: f64, mut hi: f64, iters: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dense sign scan of `f` on `[a, b]` with `n` cells; each sign-change cell
/// is refined by bisection. Returns the roots in increasing order.
pub fn sign_scan_roots<F>(f: &F, a: f64, b: f64, n: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0);
    for k in 1..=n {
        let x1 = a + (b - a) * k as f64 / n as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            roots.push(bisect_plain(f, x0, x1, 200));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    roots
}

/// First derivative by central differences.
pub fn central_diff1<F>(f: &F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second derivative by central differences.
pub fn central_diff2<F>(f: &F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Outcome of a half-period shot of `d u'' + g(u) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Shot {
    /// x at which u_x returns to zero
    pub half_period: f64,
    /// u at that turning point
    pub turning_value: f64,
}

/// Integrate `d u'' + g(u) = 0` from `u(0) = u0`, `u'(0) = 0` with classical
/// RK4 at fixed `step` until `u'` returns to zero, and locate the crossing by
/// linear interpolation. This is the shooting oracle for the time maps.
pub fn shoot_half_period<G>(g: &G, d: f64, u0: f64, step: f64, x_max: f64) -> Result<Shot>
where
    G: Fn(f64) -> f64,
{
    let acc = |u: f64| -g(u) / d;
    let mut u = u0;
    let mut v = 0.0f64;
    let mut x = 0.0f64;
    let mut started = false;
    let max_steps = (x_max / step).ceil() as usize;
    for _ in 0..max_steps {
        let (up, vp) = (u, v);
        // RK4 on (u, v)
        let k1u = v;
        let k1v = acc(u);
        let k2u = v + 0.5 * step * k1v;
        let k2v = acc(u + 0.5 * step * k1u);
        let k3u = v + 0.5 * step * k2v;
        let k3v = acc(u + 0.5 * step * k2u);
        let k4u = v + step * k3v;
        let k4v = acc(u + step * k3u);
        u += step / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x += step;
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::Numerical("shooting oracle diverged".into()));
        }
        if !started {
            if v.abs() > 1e-14 {
                started = true;
            }
            continue;
        }
        if vp != 0.0 && v.signum() != vp.signum() {
            // crossing inside [x - step, x]
            let frac = vp / (vp - v);
            return Ok(Shot {
                half_period: x - step + frac * step,
                turning_value: up + frac * (u - up),
            });
        }
    }
    Err(Error::Numerical(format!(
        "shooting oracle: u_x did not return to zero within x_max={x_max}"
    )))
}

/// Eigenvalues of a real 3x3 matrix through nalgebra's Schur decomposition —
/// the companion-route oracle for the closed-form cubic.
pub fn eig3(m: [[f64; 3]; 3]) -> [Complex64; 3] {
    let mat = Matrix3::new(
        m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
    );
    let ev = mat.complex_eigenvalues();
    [
        Complex64::new(ev[0].re, ev[0].im),
        Complex64::new(ev[1].re, ev[1].im),
        Complex64::new(ev[2].re, ev[2].im),
    ]
}

/// Monic characteristic coefficients `(c2, c1, c0)` of a 3x3 matrix computed
/// by trace / principal minors / determinant — independent of any hand
/// expansion: `det(M - x I) = -(x^3 + c2 x^2 + c1 x + c0)`.
pub fn char_poly3(m: [[f64; 3]; 3]) -> (f64, f64, f64) {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    (-tr, minors, -det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_on_known_integral() {
        let v = integrate_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn scan_finds_sine_roots() {
        let roots = sign_scan_roots(&|x: f64| x.sin(), 0.5, 7.0, 2000);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - std::f64::consts::PI).abs() < 1e-9);
        assert!((roots[1] - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn shooting_harmonic_oscillator() {
        // d u'' + u - 1 = 0 around u = 1: half period pi * sqrt(d)
        let d = 0.25;
        let shot = shoot_half_period(&|u: f64| u - 1.0, d, 1.7, 1e-4, 10.0).unwrap();
        assert!((shot.half_period - std::f64::consts::PI * d.sqrt()).abs() < 1e-6);
        assert!((shot.turning_value - 0.3).abs() < 1e-6);
    }

    #[test]
    fn eig3_triangular() {
        let ev = eig3([[2.0, 0.0, 0.0], [1.0, -3.0, 0.0], [0.0, 5.0, 0.5]]);
        let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 3.0).abs() < 1e-10);
        assert!((re[1] - 0.5).abs() < 1e-10);
        assert!((re[2] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn char_poly_matches_hand_example() {
        // companion matrix of x^3 - 2x^2 + 3x - 4
        let m = [[0.0, 0.0, 4.0], [1.0, 0.0, -3.0], [0.0, 1.0, 2.0]];
        let (c2, c1, c0) = char_poly3(m);
        assert!((c2 + 2.0).abs() < 1e-14);
        assert!((c1 - 3.0).abs() < 1e-14);
        assert!((c0 + 4.0).abs() < 1e-14);
    }
}
