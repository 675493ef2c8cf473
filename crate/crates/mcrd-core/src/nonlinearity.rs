//! The reduced nonlinearity `g(u; mu) = u [ u (mu - d u) / (kappa^2 (u+1)) - 1 ]`,
//! its potential `G(u; mu) = \int_0^u g`, and the special points of the
//! stationary theory:
//!
//! * `M_c = kappa^2 + 2 kappa` — saddle-node threshold of the constant
//!   equilibria `u_±`,
//! * `mu_c = kappa^2 + 2 sqrt(d) kappa` — below it `g` has only the root 0,
//! * `alpha < beta` — the two positive roots of `g` for `mu > mu_c`,
//! * `gamma` — the zero of `G` in `(alpha, beta)` when `G(beta) > 0`,
//! * `mu_bar` — the unique root of `G(beta(mu); mu) = 0`, bracketed by
//!   `mu_c` and the explicit `mu_1`,
//! * `eta(xi)`, `omega_*`, `chi(omega)` — equal-potential partners of the
//!   turning values, and the Appendix constant `h`.
//!
//! Roots and `gamma` are memoized per instance; the caches are thread-safe
//! and keyed by the instance's (immutable) parameters.

use crate::error::{Error, Result};
use crate::numerics::rootfind::{solve_bracketed, SolveTol};
use once_cell::sync::OnceCell;

/// `u^2/2 - u + log(1+u)`, switched to its series `u^3/3 - u^4/4 + u^5/5 - ...`
/// for small `u` where the closed form cancels catastrophically (the value is
/// O(u^3) there).
fn log_term_a(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        let u3 = u * u * u;
        u3 * (1.0 / 3.0 + u * (-0.25 + u * (0.2 + u * (-1.0 / 6.0 + u / 7.0))))
    } else {
        u * u / 2.0 - u + u.ln_1p()
    }
}

/// `-u^3/3 + u^2/2 - u + log(1+u) = -u^4/4 + u^5/5 - ...` with the same
/// small-`u` series guard.
fn log_term_b(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        let u4 = u * u * u * u;
        u4 * (-0.25 + u * (0.2 + u * (-1.0 / 6.0 + u * (1.0 / 7.0 - u / 8.0))))
    } else {
        -u * u * u / 3.0 + u * u / 2.0 - u + u.ln_1p()
    }
}

/// `log_term_a(u) / u^2 = sum_{k>=3} (-1)^(k+1) u^(k-2) / k`, series-stable
/// down to u = 0. Needed with full relative accuracy by the time-map tail
/// parametrization.
fn log_term_a_div_u2(u: f64) -> f64 {
    if u.abs() < 0.5 {
        let mut pow = u; // signed u^(k-2), starting at k = 3
        let mut acc = pow / 3.0;
        let mut k = 4.0;
        loop {
            pow = -pow * u;
            let c = pow / k;
            acc += c;
            if c.abs() <= 1e-18 * acc.abs().max(1e-300) || k > 90.0 {
                break;
            }
            k += 1.0;
        }
        acc
    } else {
        log_term_a(u) / (u * u)
    }
}

/// `log_term_b(u) / u^2 = sum_{k>=4} (-1)^(k+1) u^(k-2) / k`, series-stable
/// down to u = 0.
fn log_term_b_div_u2(u: f64) -> f64 {
    if u.abs() < 0.5 {
        let mut pow = -u * u; // signed u^(k-2), starting at k = 4
        let mut acc = pow / 4.0;
        let mut k = 5.0;
        loop {
            pow = -pow * u;
            let c = pow / k;
            acc += c;
            if c.abs() <= 1e-18 * acc.abs().max(1e-300) || k > 90.0 {
                break;
            }
            k += 1.0;
        }
        acc
    } else {
        log_term_b(u) / (u * u)
    }
}

/// Saddle-node threshold of the constant equilibria: `M_c = kappa^2 + 2 kappa`.
pub fn critical_mass(kappa: f64) -> f64 {
    kappa * kappa + 2.0 * kappa
}

/// Root threshold of the reduced nonlinearity: `mu_c = kappa^2 + 2 sqrt(d) kappa`.
pub fn mu_c(d: f64, kappa: f64) -> f64 {
    kappa * kappa + 2.0 * d.sqrt() * kappa
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumBranch {
    Zero,
    Plus,
    Minus,
}

/// A spatially constant equilibrium of the reduced system.
#[derive(Debug, Clone, Copy)]
pub struct ConstantEquilibrium {
    pub branch: EquilibriumBranch,
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

/// All nonnegative constant equilibria for mean mass `M`. `(0, M, 0)` always;
/// `(u_±, v_±, u_±)` whenever `M >= M_c` (they coincide at `u = kappa` when
/// `M = M_c`).
pub fn constant_equilibria(m: f64, kappa: f64) -> Vec<ConstantEquilibrium> {
    let mut out = vec![ConstantEquilibrium {
        branch: EquilibriumBranch::Zero,
        u: 0.0,
        v: m,
        w: 0.0,
    }];
    let q = m - kappa * kappa;
    let disc = q * q - 4.0 * kappa * kappa;
    if q > 0.0 && disc >= 0.0 {
        let s = disc.sqrt();
        let u_plus = 0.5 * (q + s);
        let u_minus = kappa * kappa / u_plus; // u_+ u_- = kappa^2
        out.push(ConstantEquilibrium {
            branch: EquilibriumBranch::Plus,
            u: u_plus,
            v: m - u_plus,
            w: u_plus,
        });
        out.push(ConstantEquilibrium {
            branch: EquilibriumBranch::Minus,
            u: u_minus,
            v: m - u_minus,
            w: u_minus,
        });
    }
    out
}

/// `u_+` alone; errors when `M < M_c`.
pub fn u_plus(m: f64, kappa: f64) -> Result<f64> {
    let q = m - kappa * kappa;
    let disc = q * q - 4.0 * kappa * kappa;
    if q <= 0.0 || disc < 0.0 {
        return Err(Error::Domain(format!(
            "u_± require M >= M_c = {}, got M = {m}",
            critical_mass(kappa)
        )));
    }
    Ok(0.5 * (q + disc.sqrt()))
}

/// Roots and threshold bundle for one `(mu, d, kappa)`.
#[derive(Debug, Clone, Copy)]
pub struct RootSet {
    pub mu_c: f64,
    pub alpha: f64,
    pub beta: f64,
    /// zero of G in (alpha, beta); present only when G(beta) > 0
    pub gamma: Option<f64>,
}

/// The reduced nonlinearity at fixed `(mu, d, kappa)`.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    mu: f64,
    d: f64,
    kappa: f64,
    roots: OnceCell<(f64, f64)>,
    gamma: OnceCell<f64>,
}

impl Nonlinearity {
    pub fn new(mu: f64, d: f64, kappa: f64) -> Result<Self> {
        if !(mu.is_finite() && d.is_finite() && kappa.is_finite()) || d <= 0.0 || kappa <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "nonlinearity needs finite mu and positive d, kappa; got mu={mu}, d={d}, kappa={kappa}"
            )));
        }
        Ok(Self {
            mu,
            d,
            kappa,
            roots: OnceCell::new(),
            gamma: OnceCell::new(),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn mu_c(&self) -> f64 {
        mu_c(self.d, self.kappa)
    }

    /// `g(u; mu)`. NaN propagates for `u <= -1` (outside the log domain).
    pub fn g(&self, u: f64) -> f64 {
        let k2 = self.kappa * self.kappa;
        u * (u * (self.mu - self.d * u) / (k2 * (u + 1.0)) - 1.0)
    }

    /// Domain-checked `g`.
    pub fn g_checked(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        Ok(self.g(u))
    }

    /// Analytic `dg/du`.
    pub fn g_u(&self, u: f64) -> f64 {
        let k2 = self.kappa * self.kappa;
        let q = self.mu - self.kappa * self.kappa;
        // numerator N(u) = -d u^3 + q u^2 - kappa^2 u, g = N / (kappa^2 (1+u))
        let n = u * (-self.d * u * u + q * u - k2);
        let np = -3.0 * self.d * u * u + 2.0 * q * u - k2;
        (np * (1.0 + u) - n) / (k2 * (1.0 + u) * (1.0 + u))
    }

    /// `g` through its cubic-over-linear factorization
    /// `d u (u - alpha)(beta - u) / (kappa^2 (1 + u))`; exact near the roots,
    /// used by the singular quadrature. Requires `mu > mu_c`.
    pub fn g_factored(&self, u: f64) -> Result<f64> {
        let (alpha, beta) = self.alpha_beta()?;
        let k2 = self.kappa * self.kappa;
        Ok(self.d * u * (u - alpha) * (beta - u) / (k2 * (1.0 + u)))
    }

    /// `G(u; mu)` in closed form.
    pub fn potential(&self, u: f64) -> f64 {
        let k2 = self.kappa * self.kappa;
        (self.mu / k2) * log_term_a(u) + (self.d / k2) * log_term_b(u) - u * u / 2.0
    }

    /// Domain-checked `G`.
    pub fn potential_checked(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        Ok(self.potential(u))
    }

    /// `G_mu(u; mu) = (1/kappa^2)(u^2/2 - u + log(1+u))`, positive for `u > 0`.
    pub fn potential_mu(&self, u: f64) -> f64 {
        log_term_a(u) / (self.kappa * self.kappa)
    }

    /// `-G(u)/u^2`, evaluated with full relative accuracy down to `u = 0`
    /// (limit 1/2). The well shape seen by the tail parametrization.
    pub(crate) fn p_coeff(&self, u: f64) -> f64 {
        let k2 = self.kappa * self.kappa;
        0.5 - (self.mu / k2) * log_term_a_div_u2(u) - (self.d / k2) * log_term_b_div_u2(u)
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        if u <= -1.0 {
            return Err(Error::Domain(format!(
                "u = {u} outside the logarithm domain u > -1"
            )));
        }
        Ok(())
    }

    /// The two positive roots `(alpha, beta)` of `g`; errors for `mu <= mu_c`
    /// where the quadratic has no real positive pair.
    pub fn alpha_beta(&self) -> Result<(f64, f64)> {
        self.roots
            .get_or_try_init(|| {
                let k2 = self.kappa * self.kappa;
                let q = self.mu - k2;
                let disc = q * q - 4.0 * self.d * k2;
                if disc <= 0.0 || q <= 0.0 || self.mu <= self.mu_c() {
                    return Err(Error::Domain(format!(
                        "positive roots require mu > mu_c = {}; got mu = {}",
                        self.mu_c(),
                        self.mu
                    )));
                }
                let s = disc.sqrt();
                let beta = (q + s) / (2.0 * self.d);
                let alpha = k2 / (self.d * beta); // alpha beta = kappa^2 / d
                Ok((alpha, beta))
            })
            .copied()
    }

    /// The unique zero of `G` in `(alpha, beta)`, defined when `G(beta) > 0`.
    pub fn gamma(&self) -> Result<f64> {
        self.gamma
            .get_or_try_init(|| {
                let (alpha, beta) = self.alpha_beta()?;
                let g_beta = self.potential(beta);
                if g_beta <= 0.0 {
                    return Err(Error::Domain(format!(
                        "G(beta) = {g_beta:e} <= 0: no zero of G in (alpha, beta); needs mu > mu_bar"
                    )));
                }
                solve_bracketed(
                    |u| self.potential(u),
                    alpha,
                    beta,
                    SolveTol::ulp(),
                    "gamma: G(u) = 0 on (alpha, beta)",
                )
            })
            .copied()
    }

    /// Root/threshold summary.
    pub fn root_set(&self) -> Result<RootSet> {
        let (alpha, beta) = self.alpha_beta()?;
        Ok(RootSet {
            mu_c: self.mu_c(),
            alpha,
            beta,
            gamma: self.gamma().ok(),
        })
    }

    /// Equal-potential partner of `xi` on the near side of the well:
    /// `eta in (0, alpha]` with `G(eta) = G(xi)`, for `xi in [alpha, gamma)`.
    pub fn eta(&self, xi: f64) -> Result<f64> {
        let (alpha, _) = self.alpha_beta()?;
        let gamma = self.gamma()?;
        if xi == alpha {
            return Ok(alpha);
        }
        if !(xi > alpha && xi < gamma) {
            return Err(Error::Domain(format!(
                "eta requires xi in [alpha, gamma) = [{alpha}, {gamma}), got {xi}"
            )));
        }
        let level = self.potential(xi);
        // G decreases from 0 to G(alpha) on [0, alpha]; level lies between.
        solve_bracketed(
            |u| self.potential(u) - level,
            0.0,
            alpha,
            SolveTol::ulp(),
            "eta: G(eta) = G(xi) on (0, alpha)",
        )
    }

    /// `omega_*` with `G(omega_*) = G(beta)` in `[0, alpha)`; defined for
    /// `mu in (mu_c, mu_bar]`. Returns 0 when `G(beta)` is at rounding level
    /// (the `mu = mu_bar` case).
    pub fn omega_star(&self) -> Result<f64> {
        let (alpha, beta) = self.alpha_beta()?;
        let g_beta = self.potential(beta);
        let scale = self.potential(alpha).abs().max(1.0);
        if g_beta > 1e-10 * scale {
            return Err(Error::Domain(format!(
                "omega_* requires G(beta) <= 0 (mu <= mu_bar); got G(beta) = {g_beta:e}"
            )));
        }
        if g_beta >= 0.0 {
            return Ok(0.0);
        }
        solve_bracketed(
            |u| self.potential(u) - g_beta,
            0.0,
            alpha,
            SolveTol::ulp(),
            "omega_*: G(omega) = G(beta) on (0, alpha)",
        )
    }

    /// Far-side partner `chi in (alpha, beta]` with `G(chi) = G(omega)`, for
    /// `omega in [omega_*, alpha)`.
    pub fn chi(&self, omega: f64) -> Result<f64> {
        let (alpha, beta) = self.alpha_beta()?;
        let omega_star = self.omega_star()?;
        if !(omega >= omega_star && omega < alpha) {
            return Err(Error::Domain(format!(
                "chi requires omega in [omega_*, alpha) = [{omega_star}, {alpha}), got {omega}"
            )));
        }
        if omega == omega_star {
            return Ok(beta);
        }
        let level = self.potential(omega);
        solve_bracketed(
            |u| self.potential(u) - level,
            alpha,
            beta,
            SolveTol::ulp(),
            "chi: G(chi) = G(omega) on (alpha, beta)",
        )
    }
}

/// Threshold pair `(mu_bar, mu_1)` for given `(d, kappa)`.
#[derive(Debug, Clone, Copy)]
pub struct Thresholds {
    pub mu_bar: f64,
    pub mu_one: f64,
}

/// Explicit upper bracket `mu_1 = kappa^2 + d + (2/3) sqrt(3 (4 d kappa^2 + 3 d^2))`
/// with `G(beta(mu_1); mu_1) > 0`.
pub fn mu_one(d: f64, kappa: f64) -> f64 {
    kappa * kappa + d + 2.0 / 3.0 * (3.0 * (4.0 * d * kappa * kappa + 3.0 * d * d)).sqrt()
}

/// The unique root of `F(mu) = G(beta(mu); mu)` in `(mu_c, mu_1]`. `F` is
/// strictly increasing, negative at `mu_c` and positive at `mu_1`, so the
/// bracket is guaranteed. Requires `0 < d < 1`.
pub fn mu_bar(d: f64, kappa: f64) -> Result<f64> {
    if !(d > 0.0 && d < 1.0) || kappa <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mu_bar needs 0 < d < 1 and kappa > 0; got d={d}, kappa={kappa}"
        )));
    }
    let muc = mu_c(d, kappa);
    let mu1 = mu_one(d, kappa);
    let f = |mu: f64| {
        let nl = Nonlinearity::new(mu, d, kappa).expect("validated");
        match nl.alpha_beta() {
            Ok((_, beta)) => nl.potential(beta),
            // at the bracket's left edge the discriminant can round to zero;
            // the double root kappa/sqrt(d) is the limit of beta there
            Err(_) => {
                let nl = Nonlinearity::new(mu, d, kappa).expect("validated");
                nl.potential(kappa / d.sqrt())
            }
        }
    };
    let lo = muc * (1.0 + 4.0 * f64::EPSILON);
    solve_bracketed(f, lo, mu1, SolveTol::ulp(), "mu_bar: G(beta(mu); mu) = 0")
}

pub fn thresholds(d: f64, kappa: f64) -> Result<Thresholds> {
    Ok(Thresholds {
        mu_bar: mu_bar(d, kappa)?,
        mu_one: mu_one(d, kappa),
    })
}

/// Appendix constant
/// `h = d beta(mu_bar) (beta(mu_bar) - alpha(mu_bar)) / (kappa^2 (beta(mu_bar) + 1))`,
/// equal to `|g_u(beta(mu_bar); mu_bar)| = |G_uu(beta(mu_bar); mu_bar)|`.
pub fn h_constant(d: f64, kappa: f64) -> Result<f64> {
    let mb = mu_bar(d, kappa)?;
    let nl = Nonlinearity::new(mb, d, kappa)?;
    let (alpha, beta) = nl.alpha_beta()?;
    Ok(d * beta * (beta - alpha) / (kappa * kappa * (beta + 1.0)))
}
