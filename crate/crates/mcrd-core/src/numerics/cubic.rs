//! Closed-form roots of a monic cubic: trigonometric branch for three real
//! roots, Cardano for one real plus a conjugate pair. The caller inspects the
//! normalized discriminant to decide whether to fall back to a matrix method
//! near multiple roots.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct CubicRoots {
    pub roots: [Complex64; 3],
    /// Discriminant of the depressed cubic, `-4p^3 - 27q^2`.
    pub disc: f64,
    /// Magnitude scale `4|p|^3 + 27q^2` for relative discriminant tests.
    pub disc_scale: f64,
}

impl CubicRoots {
    /// |disc| relative to its magnitude scale; small values flag a near
    /// multiple root.
    pub fn disc_rel(&self) -> f64 {
        if self.disc_scale == 0.0 {
            0.0
        } else {
            self.disc.abs() / self.disc_scale
        }
    }
}

/// Roots of `x^3 + a2 x^2 + a1 x + a0`.
pub fn cubic_roots_monic(a2: f64, a1: f64, a0: f64) -> CubicRoots {
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;
    let disc_scale = 4.0 * p.abs().powi(3) + 27.0 * q * q;

    let mut roots = if p == 0.0 && q == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else if disc > 0.0 {
        // three distinct real roots
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        [
            Complex64::new(m * theta.cos(), 0.0),
            Complex64::new(m * (theta - two_pi_3).cos(), 0.0),
            Complex64::new(m * (theta + two_pi_3).cos(), 0.0),
        ]
    } else {
        // one real root, complex pair (also covers disc == 0 repeated roots
        // well enough for the caller's fallback test)
        let s = (q * q / 4.0 + p.powi(3) / 27.0).max(0.0).sqrt();
        let a = if q >= 0.0 {
            -(q / 2.0 + s).cbrt()
        } else {
            (-q / 2.0 + s).cbrt()
        };
        let b = if a != 0.0 { -p / (3.0 * a) } else { 0.0 };
        let re = -(a + b) / 2.0;
        let im = 3.0f64.sqrt() / 2.0 * (a - b);
        [
            Complex64::new(a + b, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    };

    for r in roots.iter_mut() {
        *r -= shift;
    }
    CubicRoots {
        roots,
        disc,
        disc_scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_vieta(a2: f64, a1: f64, a0: f64, tol: f64) {
        let r = cubic_roots_monic(a2, a1, a0).roots;
        let sum = r[0] + r[1] + r[2];
        let pair = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let prod = r[0] * r[1] * r[2];
        let scale = 1.0 + a2.abs() + a1.abs() + a0.abs();
        assert!((sum + a2).norm() < tol * scale, "sum {sum} vs {a2}");
        assert!((pair - a1).norm() < tol * scale, "pair {pair} vs {a1}");
        assert!((prod + a0).norm() < tol * scale, "prod {prod} vs {a0}");
    }

    #[test]
    fn three_real_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let r = cubic_roots_monic(-6.0, 11.0, -6.0);
        assert!(r.disc > 0.0);
        let mut re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_pair() {
        // (x-2)(x^2+1) = x^3 - 2x^2 + x - 2
        let r = cubic_roots_monic(-2.0, 1.0, -2.0);
        assert!(r.disc < 0.0);
        assert!((r.roots[0].re - 2.0).abs() < 1e-12 && r.roots[0].im == 0.0);
        assert!((r.roots[1].im.abs() - 1.0).abs() < 1e-12);
        assert!((r.roots[1].im + r.roots[2].im).abs() < 1e-15);
    }

    #[test]
    fn vieta_over_random_coefficients() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 20.0 - 10.0
        };
        for _ in 0..500 {
            check_vieta(next(), next(), next(), 1e-9);
        }
    }

    #[test]
    fn triple_root() {
        // (x+1)^3
        let r = cubic_roots_monic(3.0, 3.0, 1.0);
        for z in r.roots {
            assert!((z.re + 1.0).abs() < 1e-7 && z.im.abs() < 1e-7);
        }
        assert!(r.disc_rel() < 1e-12);
    }
}
