//! Bracketed scalar root finding. Every root in this crate comes with a
//! guaranteed sign-change bracket, so the solver is bisection refined by a
//! secant step — unconditionally convergent, never an open method.

use crate::error::{Error, Result};

/// Stopping tolerances for [`solve_bracketed`].
#[derive(Debug, Clone, Copy)]
pub struct SolveTol {
    /// Absolute tolerance on the residual |f(x)|.
    pub residual: f64,
    /// Absolute tolerance on the bracket width.
    pub argument: f64,
    pub max_iter: usize,
}

impl Default for SolveTol {
    fn default() -> Self {
        Self {
            residual: 1e-12,
            argument: 1e-13,
            max_iter: 200,
        }
    }
}

impl SolveTol {
    /// Tighten to the floating-point floor: iterate until the bracket
    /// collapses to adjacent doubles or the residual underflows.
    pub fn ulp() -> Self {
        Self {
            residual: 0.0,
            argument: 0.0,
            max_iter: 300,
        }
    }
}

/// Hybrid bisection/secant on a sign-change bracket `[lo, hi]`.
pub fn solve_bracketed<F>(mut f: F, lo: f64, hi: f64, tol: SolveTol, context: &str) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoBracket {
            lo,
            hi,
            flo: fa,
            fhi: fb,
            context: context.to_string(),
        });
    }

    for _ in 0..tol.max_iter {
        let mid = 0.5 * (a + b);
        // secant candidate from the current bracket endpoints
        let sec = b - fb * (b - a) / (fb - fa);
        let x = if sec.is_finite() && sec > a.min(b) && sec < a.max(b) {
            // blend toward bisection when the secant step stops shrinking
            // the bracket fast enough
            if (sec - mid).abs() <= 0.45 * (b - a).abs() {
                sec
            } else {
                mid
            }
        } else {
            mid
        };
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::Numerical(format!(
                "{context}: f({x}) not finite during bracketed solve"
            )));
        }
        if fx == 0.0 || fx.abs() <= tol.residual {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a).abs() <= tol.argument || next_after_gap(a, b) {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Err(Error::NoConvergence {
        iters: tol.max_iter,
        context: context.to_string(),
    })
}

/// True when `a` and `b` are adjacent (or equal) in the double grid.
fn next_after_gap(a: f64, b: f64) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mid = 0.5 * (lo + hi);
    mid <= lo || mid >= hi
}

/// Expand `hi` geometrically until `f` changes sign against `f(lo)`.
/// Returns the final bracket.
pub fn expand_bracket_up<F>(
    mut f: F,
    lo: f64,
    hi0: f64,
    factor: f64,
    max_expand: usize,
    context: &str,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let mut hi = hi0;
    for _ in 0..max_expand {
        let fhi = f(hi);
        if fhi == 0.0 || fhi.signum() != flo.signum() {
            return Ok((lo, hi));
        }
        hi = lo + (hi - lo) * factor;
    }
    Err(Error::NoBracket {
        lo,
        hi,
        flo,
        fhi: f(hi),
        context: context.to_string(),
    })
}

/// Golden-section minimization of a unimodal-enough `f` on `[a, b]`.
/// Returns `(argmin, min)`. Used to discover minimal time-map lengths.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_root() {
        let r = solve_bracketed(|x| x * x - 2.0, 0.0, 2.0, SolveTol::default(), "sqrt2").unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_bracket() {
        let e = solve_bracketed(|x| x * x + 1.0, -1.0, 1.0, SolveTol::default(), "none");
        assert!(matches!(e, Err(Error::NoBracket { .. })));
    }

    #[test]
    fn ulp_tolerance_reaches_machine_precision() {
        let r = solve_bracketed(|x| x.cos() - x, 0.0, 1.0, SolveTol::ulp(), "dottie").unwrap();
        assert!((r.cos() - r).abs() < 1e-15);
    }

    #[test]
    fn golden_finds_parabola_min() {
        let (x, _) = golden_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-12, 200);
        assert!((x - 0.3).abs() < 1e-6);
    }

    #[test]
    fn bracket_expansion() {
        let (lo, hi) = expand_bracket_up(|x| x - 100.0, 0.0, 1.0, 2.0, 60, "grow").unwrap();
        assert!(lo < 100.0 && hi >= 100.0);
    }
}
