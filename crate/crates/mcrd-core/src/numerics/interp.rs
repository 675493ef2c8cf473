//! Monotone piecewise-cubic (Fritsch-Carlson) interpolation. Used to invert
//! the time-map sampling x(u) onto a uniform grid without overshoot.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// endpoint-slopes of the Hermite pieces
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Build from strictly increasing `xs` and monotone `ys`
    /// (non-increasing or non-decreasing).
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "interpolation needs >= 2 equal-length arrays".into(),
            ));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(format!(
                    "abscissae not strictly increasing near x={}",
                    w[0]
                )));
            }
        }
        let n = xs.len();
        let mut slopes = vec![0.0; n - 1];
        for i in 0..n - 1 {
            slopes[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut ds = vec![0.0; n];
        ds[0] = slopes[0];
        ds[n - 1] = slopes[n - 2];
        for i in 1..n - 1 {
            let (s0, s1) = (slopes[i - 1], slopes[i]);
            if s0 * s1 <= 0.0 {
                ds[i] = 0.0;
            } else {
                // weighted harmonic mean (Fritsch-Butland), monotone by construction
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                ds[i] = (w0 + w1) / (w0 / s0 + w1 / s1);
            }
        }
        // clamp endpoint slopes to preserve monotonicity on the outer pieces
        for (i, s) in [(0usize, slopes[0]), (n - 1, slopes[n - 2])] {
            if ds[i] * s < 0.0 {
                ds[i] = 0.0;
            } else if ds[i].abs() > 3.0 * s.abs() {
                ds[i] = 3.0 * s;
            }
        }
        Ok(Self { xs, ys, ds })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            k => k - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (d0, d1) = (self.ds[i], self.ds[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_linear_data() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let m = MonotoneCubic::new(xs, ys).unwrap();
        assert!((m.eval(3.7) - 6.4).abs() < 1e-13);
    }

    #[test]
    fn stays_monotone_on_steep_data() {
        // data with a sharp knee; plain cubic splines overshoot here
        let xs = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = vec![0.0, 0.01, 0.02, 5.0, 9.98, 10.0];
        let m = MonotoneCubic::new(xs, ys).unwrap();
        let mut prev = m.eval(0.0);
        for k in 1..=500 {
            let v = m.eval(5.0 * k as f64 / 500.0);
            assert!(v >= prev - 1e-12, "overshoot at sample {k}");
            prev = v;
        }
    }

    #[test]
    fn handles_decreasing_data() {
        let xs = vec![0.0, 0.5, 1.5, 2.0];
        let ys = vec![4.0, 3.0, 0.5, 0.0];
        let m = MonotoneCubic::new(xs, ys).unwrap();
        assert!(m.eval(0.25) <= 4.0 && m.eval(0.25) >= 3.0);
        assert!(m.eval(1.9) <= 0.5);
    }
}
