//! Singular time-map quadrature for the reduced stationary equation.
//!
//! A monotone segment of `d u_xx + g(u; mu) = 0` runs between two turning
//! values sharing one potential level. The time map is
//! `sqrt(d) * \int dz / sqrt(2 (E - G(z)))` between them, and the integrand
//! is singular at both ends: square-root singularities at regular turning
//! values, and logarithmically divergent layers when a turning value sits
//! near a root of `g` (the homoclinic/heteroclinic limits).
//!
//! Doubles cannot represent those limits directly: solving `rho = ell` for
//! moderate `ell` already pushes `gamma - xi` (spike) or `beta - chi` (ramp)
//! far below one ulp of `gamma` or `beta`. The engine therefore parametrizes
//! each branch by the quantity that stays representable —
//!
//! * spike: the trough value `eta in (0, alpha)`, with `delta = gamma - xi`
//!   carried separately (it may round to zero against `gamma`),
//! * ramp: `y = beta - chi`, with `omega` recovered from the level,
//!
//! and evaluates every potential difference through cancellation-free
//! forms: `V(z) = -G(z) = z^2 P(z)` with a series-stable `P`, and
//! `G(beta) - G(beta - y) = y^2 Q(y)` built from the factored `g` whose
//! `(beta - u)` factor is exact. Near a turning value `v` the substitution
//! `z = v cosh t` makes `z^2 - v^2 = v^2 sinh^2 t` exact in `t`, so the
//! integrand is a smooth O(1) function of `t` even when `v = 1e-140`.
//! All integrals here are in "paper units" (no sqrt(d) factor); callers
//! apply the length convention.

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::numerics::quadrature::{gauss_legendre, integrate_adaptive, AdaptiveOpts};
use crate::numerics::rootfind::{solve_bracketed, SolveTol};

/// Smallest turning-value scale the engine accepts; below this the
/// level `v^2 P(v)` would leave the normal double range.
pub(crate) const TURNING_FLOOR: f64 = 1e-140;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Weight {
    One,
    Z,
}

/// Quadrature mode for the arc integrals: adaptive order doubling for
/// lengths and means, fixed order for the many narrow cells of profile
/// reconstruction.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Quad {
    Adaptive,
    Fixed(usize),
}

fn integ<F>(f: F, a: f64, b: f64, quad: Quad, context: &str) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    match quad {
        Quad::Adaptive => integrate_adaptive(f, a, b, AdaptiveOpts::default(), context),
        Quad::Fixed(n) => Ok(crate::numerics::quadrature::integrate_fixed(f, a, b, n)),
    }
}

/// Root data of the well for one nonlinearity.
#[derive(Debug, Clone)]
pub(crate) struct Well<'a> {
    pub nl: &'a Nonlinearity,
    pub alpha: f64,
    pub beta: f64,
    /// zero of G in (alpha, beta); present iff G(beta) > 0
    pub gamma: Option<f64>,
    pub g_gamma: f64,
    /// G(gamma) as computed — rounding-level residual of the gamma solve
    pub pot_gamma: f64,
    /// -G(beta); positive below mu_bar, rounding-level at mu_bar
    pub v_beta: f64,
    /// V(alpha) = -G(alpha), the well depth
    pub v_alpha: f64,
}

impl<'a> Well<'a> {
    pub fn new(nl: &'a Nonlinearity) -> Result<Self> {
        let (alpha, beta) = nl.alpha_beta()?;
        let gamma = nl.gamma().ok();
        let (g_gamma, pot_gamma) = match gamma {
            Some(g) => (nl.g(g), nl.potential(g)),
            None => (0.0, 0.0),
        };
        Ok(Self {
            nl,
            alpha,
            beta,
            gamma,
            g_gamma,
            pot_gamma,
            v_beta: -nl.potential(beta),
            v_alpha: -nl.potential(alpha),
        })
    }

    fn require_gamma(&self) -> Result<f64> {
        self.gamma.ok_or_else(|| {
            Error::Domain("spike branch requires mu > mu_bar (G(beta) > 0)".into())
        })
    }

    /// Factored nonlinearity `d u (u - alpha)(beta - u) / (kappa^2 (1 + u))`;
    /// exact near both roots.
    pub fn g_fact(&self, u: f64) -> f64 {
        let k2 = self.nl.kappa() * self.nl.kappa();
        self.nl.d() * u * (u - self.alpha) * (self.beta - u) / (k2 * (1.0 + u))
    }

    /// `phi(s) = g(beta - s)/s = d (beta - s)(beta - alpha - s) / (kappa^2 (1 + beta - s))`,
    /// smooth through `s = 0` where it equals `|g_u(beta)|`.
    pub fn phi_beta(&self, s: f64) -> f64 {
        let k2 = self.nl.kappa() * self.nl.kappa();
        self.nl.d() * (self.beta - s) * (self.beta - self.alpha - s) / (k2 * (1.0 + self.beta - s))
    }

    /// `Q(y) = [G(beta) - G(beta - y)] / y^2 = \int_0^1 tau phi(y tau) dtau`,
    /// positive and smooth on `[0, beta - alpha)`; `Q(0) = h/2`.
    pub fn q_beta(&self, y: f64) -> f64 {
        let rule = gauss_legendre(24);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let tau = 0.5 * (x + 1.0);
            acc += w * tau * self.phi_beta(y * tau);
        }
        0.5 * acc
    }

    /// Mean of `g(gamma - s)` over `s in [lo, hi]`:
    /// `[D_gamma(hi) - D_gamma(lo)] / (hi - lo)` where
    /// `D_gamma(w) = G(gamma) - G(gamma - w)`. Positive for
    /// `0 <= lo < hi <= gamma - alpha`.
    pub fn avg_g_gamma(&self, lo: f64, hi: f64) -> f64 {
        let gamma = self.gamma.expect("avg_g_gamma called without gamma");
        let rule = gauss_legendre(32);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let s = lo + (hi - lo) * 0.5 * (x + 1.0);
            acc += w * self.g_fact(gamma - s);
        }
        0.5 * acc
    }

    /// Mean of `-g` over `[lo, hi] subset (0, alpha]`; the stable form of
    /// `[V(hi) - V(lo)] / (hi - lo)` (no potential subtraction: `g` is
    /// integrated pointwise).
    fn avg_neg_g(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return -self.nl.g(lo);
        }
        let rule = gauss_legendre(32);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let s = lo + (hi - lo) * 0.5 * (x + 1.0);
            acc += w * (-self.nl.g(s));
        }
        0.5 * acc
    }

    /// Mean of `g(beta - s) = s phi(s)` over `s in [lo, hi]`; the stable form
    /// of `[D_beta(hi) - D_beta(lo)] / (hi - lo)`.
    fn avg_g_beta(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return lo * self.phi_beta(lo);
        }
        let rule = gauss_legendre(32);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let s = lo + (hi - lo) * 0.5 * (x + 1.0);
            acc += w * s * self.phi_beta(s);
        }
        0.5 * acc
    }

    /// Integral of `weight(z) / sqrt(2 (V(z) - V(v0)))` over the near-side
    /// arc, in the exact parametrization `z = v0 cosh t`, `t in [t_lo, t_hi]`.
    /// `v0` is the lower turning value (`eta` or `omega`). With
    /// `z - v0 = 2 v0 sinh^2(t/2)` exact in `t` and the potential difference
    /// written as `(z - v0) * avg(-g)`, the integrand reduces to the smooth
    /// `cosh(t/2) sqrt(v0 / avg(-g))`.
    pub fn lower_arc(&self, v0: f64, t_lo: f64, t_hi: f64, weight: Weight, quad: Quad) -> Result<f64> {
        if t_hi <= t_lo {
            return Ok(0.0);
        }
        let f = |t: f64| {
            let z = v0 * t.cosh();
            let avg = self.avg_neg_g(v0, z);
            let base = (t / 2.0).cosh() * (v0 / avg).sqrt();
            match weight {
                Weight::One => base,
                Weight::Z => z * base,
            }
        };
        integ(f, t_lo, t_hi, quad, "time map: lower arc")
    }

    /// Integral of `weight(z) / sqrt(2 (V(z) - level))` over part of the
    /// spike's peak arc, in `w = gamma - z`. The level is encoded by
    /// `delta = gamma - xi`; the potential difference is the exact
    /// `(w - delta) * avg_g_gamma(delta, w)`. When `w_lo == delta` the
    /// square-root endpoint is absorbed by a `sin^2` substitution.
    pub fn peak_arc_spike(
        &self,
        delta: f64,
        w_lo: f64,
        w_hi: f64,
        weight: Weight,
        quad: Quad,
    ) -> Result<f64> {
        let gamma = self.require_gamma()?;
        if w_hi <= w_lo {
            return Ok(0.0);
        }
        if w_lo == delta {
            let span = w_hi - delta;
            let f = |theta: f64| {
                let s2 = theta.sin() * theta.sin();
                let w = delta + span * s2;
                let avg = self.avg_g_gamma(delta, w);
                let base = 2.0 * span.sqrt() * theta.cos() / (2.0 * avg).sqrt();
                match weight {
                    Weight::One => base,
                    Weight::Z => (gamma - w) * base,
                }
            };
            integ(
                f,
                0.0,
                std::f64::consts::FRAC_PI_2,
                quad,
                "time map: spike peak arc (turning end)",
            )
        } else {
            let f = |w: f64| {
                let diff = (w - delta) * self.avg_g_gamma(delta, w);
                let base = 1.0 / (2.0 * diff).sqrt();
                match weight {
                    Weight::One => base,
                    Weight::Z => (gamma - w) * base,
                }
            };
            integ(f, w_lo, w_hi, quad, "time map: spike peak arc")
        }
    }

    /// Integral of `weight(z) / sqrt(2 (V(z) - level))` over part of the
    /// ramp's far arc near `beta`, in the parametrization
    /// `beta - z = y cosh t`. The potential difference is the exact
    /// `(y' - y) * avg(g(beta - s))`, giving the smooth integrand
    /// `cosh(t/2) sqrt(y / avg)`.
    pub fn far_arc_ramp(&self, y: f64, t_lo: f64, t_hi: f64, weight: Weight, quad: Quad) -> Result<f64> {
        if t_hi <= t_lo {
            return Ok(0.0);
        }
        let f = |t: f64| {
            let yy = y * t.cosh();
            let avg = self.avg_g_beta(y, yy);
            let base = (t / 2.0).cosh() * (y / avg).sqrt();
            match weight {
                Weight::One => base,
                Weight::Z => (self.beta - yy) * base,
            }
        };
        integ(f, t_lo, t_hi, quad, "time map: ramp far arc")
    }

    /// Exponential-tail integral toward `u = 0` at exactly zero level:
    /// `\int_{z_lo}^{z_hi} weight(z) dz / sqrt(2 V(z))` via `z = e^{-s}`,
    /// where the integrand becomes `weight(z) / sqrt(2 P(z))` — smooth for
    /// arbitrarily small `z_lo`. Used by the homoclinic/heteroclinic limits.
    pub fn zero_tail_arc(&self, z_lo: f64, z_hi: f64, weight: Weight, quad: Quad) -> Result<f64> {
        if z_hi <= z_lo {
            return Ok(0.0);
        }
        let f = |s: f64| {
            let z = (-s).exp();
            let base = 1.0 / (2.0 * self.nl.p_coeff(z)).sqrt();
            match weight {
                Weight::One => base,
                Weight::Z => z * base,
            }
        };
        integ(f, -z_hi.ln(), -z_lo.ln(), quad, "time map: zero tail arc")
    }

    /// Exponential-tail integral toward `u = beta` at level `G(beta)`:
    /// `\int weight(z) dz / sqrt(2 D_beta(beta - z))` via `beta - z = e^{-s}`,
    /// integrand `weight / sqrt(2 Q(y'))`. Used by the beta-asymptotic limits.
    pub fn beta_tail_arc(&self, y_lo: f64, y_hi: f64, weight: Weight, quad: Quad) -> Result<f64> {
        if y_hi <= y_lo {
            return Ok(0.0);
        }
        let f = |s: f64| {
            let y = (-s).exp();
            let base = 1.0 / (2.0 * self.q_beta(y)).sqrt();
            match weight {
                Weight::One => base,
                Weight::Z => (self.beta - y) * base,
            }
        };
        integ(f, -y_hi.ln(), -y_lo.ln(), quad, "time map: beta tail arc")
    }
}

/// Spike-branch segment: monotone decreasing from `xi = gamma - delta`
/// down to `eta`, sharing level `G(eta) = G(xi)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SpikeSeg {
    pub eta: f64,
    /// V(eta) = eta^2 P(eta); 0 for the homoclinic limit
    pub v_eta: f64,
    /// gamma - xi, carried separately from gamma
    pub delta: f64,
    /// gamma - alpha
    pub w_alpha: f64,
    /// acosh(alpha / eta); infinite in the homoclinic limit eta = 0
    pub t1: f64,
}

impl SpikeSeg {
    /// Build from the trough value. `eta = 0` yields the homoclinic segment
    /// (peak arc only; the lower arc is replaced by the zero tail).
    pub fn from_eta(well: &Well, eta: f64) -> Result<Self> {
        let gamma = well.require_gamma()?;
        if !(eta >= 0.0 && eta < well.alpha) {
            return Err(Error::Domain(format!(
                "spike trough eta must lie in [0, alpha = {}), got {eta}",
                well.alpha
            )));
        }
        if eta > 0.0 && eta < TURNING_FLOOR {
            return Err(Error::Domain(format!(
                "eta = {eta:e} below the engine floor {TURNING_FLOOR:e}"
            )));
        }
        let v_eta = eta * eta * well.nl.p_coeff(eta);
        let w_alpha = gamma - well.alpha;
        // delta solves D_gamma(delta) = V(eta) + G(gamma)
        let rhs = (v_eta + well.pot_gamma).max(0.0);
        let scale = well.g_gamma * w_alpha;
        let delta = if rhs <= 1e-13 * scale {
            // below the gamma-solve noise floor a linearization is as good
            // as the data allow
            rhs / well.g_gamma
        } else {
            solve_bracketed(
                |w| w * well.avg_g_gamma(0.0, w) - rhs,
                0.0,
                w_alpha,
                SolveTol {
                    residual: 0.0,
                    argument: 0.0,
                    max_iter: 300,
                },
                "spike: delta from level",
            )?
        };
        let t1 = if eta > 0.0 {
            (well.alpha / eta).acosh()
        } else {
            f64::INFINITY
        };
        Ok(Self {
            eta,
            v_eta,
            delta,
            w_alpha,
            t1,
        })
    }

    /// Build from a resolvable peak value `xi in (alpha, gamma)`.
    pub fn from_xi(well: &Well, xi: f64) -> Result<Self> {
        let gamma = well.require_gamma()?;
        if !(xi > well.alpha && xi < gamma) {
            return Err(Error::Domain(format!(
                "spike peak xi must lie in (alpha, gamma) = ({}, {gamma}), got {xi}",
                well.alpha
            )));
        }
        let eta = well.nl.eta(xi)?;
        let mut seg = Self::from_eta(well, eta)?;
        // keep the caller's xi exactly: it is resolvable here
        seg.delta = gamma - xi;
        Ok(seg)
    }

    pub fn xi(&self, well: &Well) -> f64 {
        well.gamma.expect("spike segment has gamma") - self.delta
    }

    /// Time map (no sqrt(d)): lower arc plus peak arc.
    pub fn length(&self, well: &Well) -> Result<f64> {
        if self.eta == 0.0 {
            return Err(Error::Domain(
                "homoclinic segment (eta = 0) has infinite length".into(),
            ));
        }
        let lower = well.lower_arc(self.eta, 0.0, self.t1, Weight::One, Quad::Adaptive)?;
        let peak =
            well.peak_arc_spike(self.delta, self.delta, self.w_alpha, Weight::One, Quad::Adaptive)?;
        Ok(lower + peak)
    }

    /// `\int z dz / sqrt(2 (E - G))` over the segment (no sqrt(d), not
    /// divided by the length).
    pub fn mean_integral(&self, well: &Well) -> Result<f64> {
        let lower = well.lower_arc(self.eta, 0.0, self.t1, Weight::Z, Quad::Adaptive)?;
        let peak =
            well.peak_arc_spike(self.delta, self.delta, self.w_alpha, Weight::Z, Quad::Adaptive)?;
        Ok(lower + peak)
    }
}

/// Ramp-branch segment: monotone increasing from `omega` up to
/// `chi = beta - y`, level `G(omega) = G(chi)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RampSeg {
    pub y: f64,
    pub omega: f64,
    /// level as a well depth: -G = omega^2 P(omega) = y^2 Q(y) + v_beta
    pub s_level: f64,
    /// acosh(alpha / omega)
    pub t1: f64,
    /// acosh((beta - alpha) / y)
    pub t2: f64,
    /// heteroclinic-limit branch: the level at beta is pinned to exactly
    /// G(beta) rather than read back through floating-point G
    pub front: bool,
}

impl RampSeg {
    /// Build from `y = beta - chi`, recovering `omega` from the level.
    pub fn from_y(well: &Well, y: f64, front: bool) -> Result<Self> {
        let span = well.beta - well.alpha;
        if !(y > 0.0 && y < span) {
            return Err(Error::Domain(format!(
                "ramp parameter y = beta - chi must lie in (0, beta - alpha = {span}), got {y}"
            )));
        }
        if y < TURNING_FLOOR {
            return Err(Error::Domain(format!(
                "y = {y:e} below the engine floor {TURNING_FLOOR:e}"
            )));
        }
        let q_y = well.q_beta(y);
        let v_beta_eff = if front { 0.0 } else { well.v_beta.max(0.0) };
        let s_level = y * y * q_y + v_beta_eff;
        if s_level >= well.v_alpha {
            return Err(Error::Domain(format!(
                "level {s_level:e} reaches the well depth {:e}: no omega in (0, alpha)",
                well.v_alpha
            )));
        }
        // solve V(omega) = s_level in log space; V = w^2 P(w) is increasing
        // on (0, alpha)
        let s_lo = (2.0 * s_level).sqrt().ln() - 2.0;
        let s_hi = well.alpha.ln();
        let ln_omega = solve_bracketed(
            |s| {
                let w = s.exp();
                w * w * well.nl.p_coeff(w) - s_level
            },
            s_lo,
            s_hi,
            SolveTol {
                residual: 0.0,
                argument: 1e-14,
                max_iter: 300,
            },
            "ramp: omega from level",
        )?;
        let omega = ln_omega.exp();
        Ok(Self {
            y,
            omega,
            s_level,
            t1: (well.alpha / omega).acosh(),
            t2: (span / y).acosh(),
            front,
        })
    }

    /// Build from a resolvable near-side value `omega in (omega_*, alpha)`.
    pub fn from_omega(well: &Well, omega: f64, front: bool) -> Result<Self> {
        let chi = well.nl.chi(omega)?;
        let y = well.beta - chi;
        if y <= 0.0 {
            return Err(Error::Domain(
                "omega is indistinguishable from omega_*: chi rounds to beta; \
                 parametrize by y = beta - chi instead"
                    .into(),
            ));
        }
        Ok(Self {
            y,
            omega,
            s_level: omega * omega * well.nl.p_coeff(omega),
            t1: (well.alpha / omega).acosh(),
            t2: ((well.beta - well.alpha) / y).acosh(),
            front,
        })
    }

    pub fn chi(&self, well: &Well) -> f64 {
        well.beta - self.y
    }

    pub fn length(&self, well: &Well) -> Result<f64> {
        let near = well.lower_arc(self.omega, 0.0, self.t1, Weight::One, Quad::Adaptive)?;
        let far = well.far_arc_ramp(self.y, 0.0, self.t2, Weight::One, Quad::Adaptive)?;
        Ok(near + far)
    }

    pub fn mean_integral(&self, well: &Well) -> Result<f64> {
        let near = well.lower_arc(self.omega, 0.0, self.t1, Weight::Z, Quad::Adaptive)?;
        let far = well.far_arc_ramp(self.y, 0.0, self.t2, Weight::Z, Quad::Adaptive)?;
        Ok(near + far)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::{mu_bar, mu_c};
    use crate::oracle;

    const D: f64 = 0.1;
    const KAPPA: f64 = 2.0;

    /// Naive reference: sin^2-substituted quadrature of the raw integrand
    /// over [eta, xi], valid while everything is resolvable. Independent of
    /// the engine's split/parametrization.
    fn naive_time_map(nl: &Nonlinearity, lo: f64, hi: f64, level_at: f64, weight_z: bool) -> f64 {
        let level = nl.potential(level_at);
        let f = |theta: f64| {
            let s2 = theta.sin() * theta.sin();
            let z = lo + (hi - lo) * s2;
            let diff = level - nl.potential(z);
            if diff <= 0.0 {
                // rounding noise at the turning ends; the true integrand is
                // O(1) there, the skipped measure is ~1e-8
                return 0.0;
            }
            let base = 2.0 * (hi - lo) * theta.sin() * theta.cos() / (2.0 * diff).sqrt();
            if weight_z {
                z * base
            } else {
                base
            }
        };
        oracle::integrate_simpson(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-10)
    }

    #[test]
    fn spike_length_matches_naive_quadrature() {
        let mb = mu_bar(D, KAPPA).unwrap();
        let nl = Nonlinearity::new(mb + 1.0, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        let gamma = nl.gamma().unwrap();
        for frac in [0.25, 0.5, 0.8] {
            let xi = well.alpha + (gamma - well.alpha) * frac;
            let seg = SpikeSeg::from_xi(&well, xi).unwrap();
            let fast = seg.length(&well).unwrap();
            let slow = naive_time_map(&nl, seg.eta, xi, xi, false);
            assert!(
                (fast - slow).abs() < 1e-6 * slow,
                "frac={frac}: {fast} vs {slow}"
            );
            let m_fast = seg.mean_integral(&well).unwrap();
            let m_slow = naive_time_map(&nl, seg.eta, xi, xi, true);
            assert!(
                (m_fast - m_slow).abs() < 1e-6 * m_slow,
                "mean frac={frac}: {m_fast} vs {m_slow}"
            );
        }
    }

    #[test]
    fn spike_length_matches_shooting() {
        let mb = mu_bar(D, KAPPA).unwrap();
        let nl = Nonlinearity::new(mb + 1.0, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        let gamma = nl.gamma().unwrap();
        let xi = 0.5 * (well.alpha + gamma);
        let seg = SpikeSeg::from_xi(&well, xi).unwrap();
        let ell = D.sqrt() * seg.length(&well).unwrap();
        let shot = oracle::shoot_half_period(&|u| nl.g(u), D, xi, 1e-5, 4.0 * ell).unwrap();
        assert!(
            (ell - shot.half_period).abs() < 1e-6 * ell,
            "{ell} vs {}",
            shot.half_period
        );
        assert!((seg.eta - shot.turning_value).abs() < 1e-5);
    }

    #[test]
    fn ramp_length_matches_naive_and_shooting() {
        let mb = mu_bar(D, KAPPA).unwrap();
        let mu = 0.5 * (mu_c(D, KAPPA) + mb);
        let nl = Nonlinearity::new(mu, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        let ws = nl.omega_star().unwrap();
        let omega = 0.5 * (ws + well.alpha);
        let seg = RampSeg::from_omega(&well, omega, false).unwrap();
        let fast = seg.length(&well).unwrap();
        let slow = naive_time_map(&nl, omega, seg.chi(&well), omega, false);
        assert!((fast - slow).abs() < 1e-6 * slow, "{fast} vs {slow}");

        let ell = D.sqrt() * fast;
        let shot = oracle::shoot_half_period(&|u| nl.g(u), D, omega, 1e-5, 4.0 * ell).unwrap();
        assert!(
            (ell - shot.half_period).abs() < 1e-6 * ell,
            "{ell} vs {}",
            shot.half_period
        );
        assert!((seg.chi(&well) - shot.turning_value).abs() < 1e-5);

        let m_fast = seg.mean_integral(&well).unwrap();
        let m_slow = naive_time_map(&nl, omega, seg.chi(&well), omega, true);
        assert!((m_fast - m_slow).abs() < 1e-6 * m_slow);
    }

    #[test]
    fn from_y_and_from_omega_agree() {
        let mb = mu_bar(D, KAPPA).unwrap();
        let mu = 0.5 * (mu_c(D, KAPPA) + mb);
        let nl = Nonlinearity::new(mu, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        let ws = nl.omega_star().unwrap();
        let omega = 0.6 * well.alpha + 0.4 * ws;
        let a = RampSeg::from_omega(&well, omega, false).unwrap();
        let b = RampSeg::from_y(&well, a.y, false).unwrap();
        assert!((a.omega - b.omega).abs() < 1e-9 * a.omega, "{} vs {}", a.omega, b.omega);
        let la = a.length(&well).unwrap();
        let lb = b.length(&well).unwrap();
        assert!((la - lb).abs() < 1e-7 * la, "{la} vs {lb}");
    }

    #[test]
    fn spike_log_divergence_in_eta() {
        // length grows affinely in log(1/eta), far into the unresolvable-xi
        // regime; slope 1/sqrt(2 P(0)) = 1 in paper units
        let mb = mu_bar(D, KAPPA).unwrap();
        let nl = Nonlinearity::new(mb + 1.0, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        let mut prev = None;
        let mut slopes = Vec::new();
        for k in [40.0f64, 80.0, 160.0, 320.0] {
            let eta = (-k).exp();
            let seg = SpikeSeg::from_eta(&well, eta).unwrap();
            let len = seg.length(&well).unwrap();
            if let Some((pk, pl)) = prev {
                slopes.push((len - pl) / (k - pk));
            }
            prev = Some((k, len));
        }
        for s in &slopes {
            assert!((s - 1.0).abs() < 1e-6, "slope {s}");
        }
    }

    #[test]
    fn ramp_log_divergence_in_y() {
        // slope of length vs log(1/y) is 1/sqrt(2 Q(0)) = 1/sqrt(h)
        let mb = mu_bar(D, KAPPA).unwrap();
        let mu = 0.5 * (mu_c(D, KAPPA) + mb);
        let nl = Nonlinearity::new(mu, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        let h = 2.0 * well.q_beta(0.0);
        let mut prev = None;
        for k in [40.0f64, 80.0, 160.0, 320.0] {
            let y = (-k).exp();
            let seg = RampSeg::from_y(&well, y, false).unwrap();
            let len = seg.length(&well).unwrap();
            if let Some((pk, pl)) = prev {
                let slope: f64 = (len - pl) / (k - pk);
                assert!((slope - 1.0 / h.sqrt()).abs() < 1e-5, "slope {slope}");
            }
            prev = Some((k, len));
        }
    }

    #[test]
    fn q_beta_limit_is_half_h() {
        // Q(0) = |g_u(beta)| / 2
        let mb = mu_bar(D, KAPPA).unwrap();
        for mu in [0.5 * (mu_c(D, KAPPA) + mb), mb] {
            let nl = Nonlinearity::new(mu, D, KAPPA).unwrap();
            let well = Well::new(&nl).unwrap();
            let q0 = well.q_beta(0.0);
            let gu = nl.g_u(well.beta).abs();
            assert!((2.0 * q0 - gu).abs() < 1e-12 * gu, "mu={mu}");
        }
    }

    #[test]
    fn d_beta_identity() {
        // y^2 Q(y) = G(beta) - G(beta - y) wherever the right side is resolvable
        let mb = mu_bar(D, KAPPA).unwrap();
        let nl = Nonlinearity::new(mb - 0.05, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        for y in [0.01, 0.3, 1.5, 4.0] {
            let direct = nl.potential(well.beta) - nl.potential(well.beta - y);
            let stable = y * y * well.q_beta(y);
            assert!(
                (direct - stable).abs() < 1e-9 * stable.abs() + 1e-13,
                "y={y}: {direct} vs {stable}"
            );
        }
    }

    #[test]
    fn segment_domain_errors() {
        let mb = mu_bar(D, KAPPA).unwrap();
        let nl = Nonlinearity::new(mb + 1.0, D, KAPPA).unwrap();
        let well = Well::new(&nl).unwrap();
        assert!(SpikeSeg::from_eta(&well, well.alpha).is_err());
        assert!(SpikeSeg::from_eta(&well, -0.1).is_err());
        assert!(SpikeSeg::from_xi(&well, well.alpha).is_err());
        assert!(SpikeSeg::from_xi(&well, nl.gamma().unwrap()).is_err());
        let below = Nonlinearity::new(mb - 0.05, D, KAPPA).unwrap();
        let wbelow = Well::new(&below).unwrap();
        assert!(SpikeSeg::from_eta(&wbelow, 0.5).is_err());
        assert!(RampSeg::from_y(&wbelow, wbelow.beta - wbelow.alpha, false).is_err());
        assert!(RampSeg::from_y(&wbelow, 0.0, false).is_err());
    }
}
