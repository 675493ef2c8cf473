//! Thomas algorithm for tridiagonal systems. The Crank-Nicolson diffusion
//! solves in `pdesim` call this once per field per stage.

/// Solve `A x = rhs` for tridiagonal `A` with sub/main/super diagonals
/// `(sub, diag, sup)`; `sub[i]` multiplies `x[i-1]` in row `i`, `sup[i]`
/// multiplies `x[i+1]`. `rhs` is overwritten with the solution.
///
/// Scratch buffers are caller-provided so the time stepper can reuse them.
pub fn solve_in_place(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &mut [f64],
    scratch: &mut Vec<f64>,
) {
    let n = rhs.len();
    debug_assert!(n >= 2);
    debug_assert_eq!(diag.len(), n);
    scratch.clear();
    scratch.resize(n, 0.0);

    // forward sweep
    scratch[0] = sup[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * scratch[i - 1];
        scratch[i] = sup[i] / m;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / m;
    }
    // back substitution
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_solve() {
        let n = 9;
        let sub: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { -0.3 - 0.01 * i as f64 }).collect();
        let sup: Vec<f64> = (0..n).map(|i| if i == n - 1 { 0.0 } else { -0.4 + 0.02 * i as f64 }).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 + 0.1 * i as f64).collect();
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();

        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += sub[i] * x_true[i - 1];
            }
            if i < n - 1 {
                rhs[i] += sup[i] * x_true[i + 1];
            }
        }
        let mut scratch = Vec::new();
        solve_in_place(&sub, &diag, &sup, &mut rhs, &mut scratch);
        for i in 0..n {
            assert!((rhs[i] - x_true[i]).abs() < 1e-12, "i={i}");
        }
    }
}
