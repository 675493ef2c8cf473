//! Gauss-Legendre quadrature. Rules are generated by Newton iteration on the
//! Legendre recurrence, cached per order, and wrapped in an order-doubling
//! driver that stops when two successive orders agree.

use crate::error::{Error, Result};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Nodes and weights on the reference interval [-1, 1].
#[derive(Debug)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

static RULE_CACHE: Lazy<Mutex<HashMap<usize, Arc<GlRule>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Legendre P_n(x) and its derivative by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // derivative from P_n and P_{n-1}
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build_rule(n: usize) -> GlRule {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style starting guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_pair(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (dp * dp);
    }
    GlRule { nodes, weights }
}

/// Fetch (building and caching on first use) the n-point rule.
pub fn gauss_legendre(n: usize) -> Arc<GlRule> {
    let mut cache = RULE_CACHE.lock().unwrap();
    cache.entry(n).or_insert_with(|| Arc::new(build_rule(n))).clone()
}

/// Fixed-order integral of `f` over `[a, b]`.
pub fn integrate_fixed<F>(f: F, a: f64, b: f64, n: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let rule = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Options for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOpts {
    pub start_order: usize,
    pub max_order: usize,
    /// Relative agreement between successive orders that counts as converged.
    pub rel_tol: f64,
}

impl Default for AdaptiveOpts {
    fn default() -> Self {
        Self {
            start_order: 32,
            max_order: 4096,
            rel_tol: 1e-11,
        }
    }
}

/// Double the order until two successive values agree to `rel_tol`
/// (relative to the magnitude of the integral, floored at 1).
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, opts: AdaptiveOpts, context: &str) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let mut n = opts.start_order.max(4);
    let mut prev = integrate_fixed(&f, a, b, n);
    loop {
        n *= 2;
        let cur = integrate_fixed(&f, a, b, n);
        let change = (cur - prev).abs();
        if !cur.is_finite() {
            return Err(Error::Numerical(format!(
                "{context}: non-finite quadrature value at order {n}"
            )));
        }
        if change <= opts.rel_tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        if n >= opts.max_order {
            return Err(Error::Quadrature {
                order: n,
                change,
                context: context.to_string(),
            });
        }
        prev = cur;
    }
}
