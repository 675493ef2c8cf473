//! Time-map construction of the monotone stationary profiles: the singular
//! quadratures `rho` and `rho_tilde`, boundary-value solves `xi(mu, ell)` and
//! `omega(mu, ell)`, profile reconstruction, mean values, the nonlocal
//! mass-constraint solve `mu = M - (1 - d) <u>`, and the homoclinic /
//! heteroclinic limit profiles.

pub(crate) mod engine;
mod limits;
mod profile;

pub use limits::{heteroclinic_profile, homoclinic_profile};
pub use profile::{
    residual_2nd, residual_inf_2nd, residual_inf_4th, trapezoid_mean, ProfileBranch,
    ProfileSolution,
};

use crate::error::{Error, Result};
use crate::nonlinearity::{mu_bar, Nonlinearity};
use crate::numerics::rootfind::{golden_min, solve_bracketed, SolveTol};
use engine::{RampSeg, SpikeSeg, Well, TURNING_FLOOR};
use serde::Serialize;

/// Length convention of the time maps.
///
/// The first integral of `d u_xx + g = 0` is `(d/2) u_x^2 + G = const`, so
/// the physically consistent arc length carries a factor `sqrt(d)` relative
/// to the bare quadrature `\int dz / sqrt(2 (E - G))`. `Physical` (default)
/// produces profiles that satisfy the PDE with diffusivity `d` and compare
/// directly to simulation output; `PaperLiteral` reproduces the bare
/// formulas (equivalent to rescaling x by `sqrt(d)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Convention {
    Physical,
    PaperLiteral,
}

impl Convention {
    pub fn factor(self, d: f64) -> f64 {
        match self {
            Convention::Physical => d.sqrt(),
            Convention::PaperLiteral => 1.0,
        }
    }
}

/// Boundary data of a spike-branch (monotone decreasing) solution. The
/// trough `eta` parametrizes the branch; `xi` is reported as a double but
/// for long domains it is within rounding of `gamma` — the engine carries
/// `gamma - xi` separately.
#[derive(Debug, Clone, Copy)]
pub struct SpikeBoundary {
    pub xi: f64,
    pub eta: f64,
    pub(crate) seg: SpikeSeg,
}

/// Boundary data of a ramp-branch (monotone increasing) solution,
/// parametrized by `y = beta - chi`.
#[derive(Debug, Clone, Copy)]
pub struct RampBoundary {
    pub omega: f64,
    pub chi: f64,
    pub(crate) seg: RampSeg,
}

/// Either branch's boundary data.
#[derive(Debug, Clone, Copy)]
pub enum BranchBoundary {
    Spike(SpikeBoundary),
    Ramp(RampBoundary),
}

impl BranchBoundary {
    /// The value taken at `x = 0`.
    pub fn start_value(&self) -> f64 {
        match self {
            BranchBoundary::Spike(b) => b.xi,
            BranchBoundary::Ramp(b) => b.omega,
        }
    }

    /// The value taken at `x = ell`.
    pub fn end_value(&self) -> f64 {
        match self {
            BranchBoundary::Spike(b) => b.eta,
            BranchBoundary::Ramp(b) => b.chi,
        }
    }
}

/// Time maps for one nonlinearity under a fixed length convention.
#[derive(Debug, Clone, Copy)]
pub struct TimeMap<'a> {
    nl: &'a Nonlinearity,
    convention: Convention,
}

impl<'a> TimeMap<'a> {
    pub fn new(nl: &'a Nonlinearity) -> Self {
        Self {
            nl,
            convention: Convention::Physical,
        }
    }

    pub fn with_convention(nl: &'a Nonlinearity, convention: Convention) -> Self {
        Self { nl, convention }
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        self.nl
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    fn factor(&self) -> f64 {
        self.convention.factor(self.nl.d())
    }

    fn well(&self) -> Result<Well<'a>> {
        Well::new(self.nl)
    }

    /// Spike boundary from a resolvable peak value `xi in (alpha, gamma)`.
    pub fn spike_boundary_from_xi(&self, xi: f64) -> Result<SpikeBoundary> {
        let well = self.well()?;
        let seg = SpikeSeg::from_xi(&well, xi)?;
        Ok(SpikeBoundary {
            xi,
            eta: seg.eta,
            seg,
        })
    }

    /// Spike boundary from the trough value `eta in (0, alpha)`; remains
    /// accurate when `xi` is beyond double resolution below `gamma`.
    pub fn spike_boundary_from_eta(&self, eta: f64) -> Result<SpikeBoundary> {
        let well = self.well()?;
        let seg = SpikeSeg::from_eta(&well, eta)?;
        Ok(SpikeBoundary {
            xi: seg.xi(&well),
            eta,
            seg,
        })
    }

    /// Ramp boundary from a resolvable `omega in (omega_*, alpha)`.
    pub fn ramp_boundary_from_omega(&self, omega: f64, front: bool) -> Result<RampBoundary> {
        let well = self.well()?;
        let seg = RampSeg::from_omega(&well, omega, front)?;
        Ok(RampBoundary {
            omega,
            chi: seg.chi(&well),
            seg,
        })
    }

    /// Ramp boundary from `y = beta - chi`; remains accurate when `chi` is
    /// beyond double resolution below `beta`.
    pub fn ramp_boundary_from_y(&self, y: f64, front: bool) -> Result<RampBoundary> {
        let well = self.well()?;
        let seg = RampSeg::from_y(&well, y, front)?;
        Ok(RampBoundary {
            omega: seg.omega,
            chi: seg.chi(&well),
            seg,
        })
    }

    /// `rho(xi, mu)`: half-domain length of the decreasing solution with
    /// peak `xi`. Diverges as `xi -> gamma`; strictly increasing near it.
    pub fn rho(&self, xi: f64) -> Result<f64> {
        let b = self.spike_boundary_from_xi(xi)?;
        self.length(&BranchBoundary::Spike(b))
    }

    /// `rho_tilde(omega, mu)`: length of the increasing solution starting
    /// at `omega`. Diverges as `omega -> omega_*`.
    pub fn rho_tilde(&self, omega: f64) -> Result<f64> {
        let b = self.ramp_boundary_from_omega(omega, false)?;
        self.length(&BranchBoundary::Ramp(b))
    }

    /// Length of the segment described by a boundary.
    pub fn length(&self, boundary: &BranchBoundary) -> Result<f64> {
        let well = self.well()?;
        let raw = match boundary {
            BranchBoundary::Spike(b) => b.seg.length(&well)?,
            BranchBoundary::Ramp(b) => b.seg.length(&well)?,
        };
        Ok(self.factor() * raw)
    }

    /// `<u>` over the segment by direct quadrature of
    /// `\int z dz / sqrt(2 (E - G))`, divided by `ell`.
    pub fn mean_u(&self, boundary: &BranchBoundary, ell: f64) -> Result<f64> {
        let well = self.well()?;
        let raw = match boundary {
            BranchBoundary::Spike(b) => b.seg.mean_integral(&well)?,
            BranchBoundary::Ramp(b) => b.seg.mean_integral(&well)?,
        };
        Ok(self.factor() * raw / ell)
    }

    /// Sampled profile on `[0, ell]` with `n` points.
    pub fn profile(&self, boundary: &BranchBoundary, ell: f64, n: usize) -> Result<ProfileSolution> {
        profile::build_profile(self, boundary, ell, n)
    }

    /// Minimal spike length `ell_0(mu)` over the admissible trough interval
    /// (coarse scan plus golden-section refinement), and the trough value
    /// attaining it.
    pub fn minimal_length_spike(&self) -> Result<(f64, f64)> {
        let well = self.well()?;
        let s_max = (well.alpha / TURNING_FLOOR).ln();
        self.minimal_over_scan(1e-3, s_max, |s| {
            let eta = well.alpha * (-s).exp();
            let seg = SpikeSeg::from_eta(&well, eta)?;
            Ok(self.factor() * seg.length(&well)?)
        })
    }

    /// Minimal ramp length and the `y = beta - chi` attaining it.
    pub fn minimal_length_ramp(&self, front: bool) -> Result<(f64, f64)> {
        let well = self.well()?;
        let span = well.beta - well.alpha;
        let s_max = (span / TURNING_FLOOR).ln();
        self.minimal_over_scan(1e-3, s_max, |s| {
            let y = span * (-s).exp();
            let seg = RampSeg::from_y(&well, y, front)?;
            Ok(self.factor() * seg.length(&well)?)
        })
    }

    fn minimal_over_scan<F>(&self, s_lo: f64, s_hi: f64, len_at: F) -> Result<(f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let n = 17;
        let mut best = (f64::INFINITY, s_lo);
        for i in 0..n {
            let s = s_lo + (s_hi - s_lo) * i as f64 / (n - 1) as f64;
            let l = len_at(s)?;
            if l < best.0 {
                best = (l, s);
            }
        }
        let step = (s_hi - s_lo) / (n - 1) as f64;
        let a = (best.1 - step).max(s_lo);
        let b = (best.1 + step).min(s_hi);
        let (s_min, l_min) = golden_min(|s| len_at(s).unwrap_or(f64::INFINITY), a, b, 1e-10, 200);
        Ok((l_min, s_min))
    }

    /// Solve `rho(xi, mu) = ell` for the spike branch. The bracket is seeded
    /// from the divergence structure (lengths grow without bound toward the
    /// homoclinic limit) and verified rather than assumed monotone; the
    /// returned root is the one on the asymptote side of the length minimum.
    pub fn solve_xi(&self, ell: f64) -> Result<SpikeBoundary> {
        let well = self.well()?;
        let s_max = (well.alpha / TURNING_FLOOR).ln();
        let eta_of = |s: f64| well.alpha * (-s).exp();
        let len_at = |s: f64| -> Result<f64> {
            let seg = SpikeSeg::from_eta(&well, eta_of(s))?;
            Ok(self.factor() * seg.length(&well)?)
        };
        let s = self.solve_length_on_scan(ell, 1e-3, s_max, len_at)?;
        self.spike_boundary_from_eta(eta_of(s))
    }

    /// Solve `rho_tilde(omega, mu) = ell` for the ramp branch
    /// (`front = true` pins the level at `beta` to the heteroclinic value).
    pub fn solve_omega(&self, ell: f64, front: bool) -> Result<RampBoundary> {
        let well = self.well()?;
        let span = well.beta - well.alpha;
        let s_max = (span / TURNING_FLOOR).ln();
        let y_of = |s: f64| span * (-s).exp();
        let len_at = |s: f64| -> Result<f64> {
            let seg = RampSeg::from_y(&well, y_of(s), front)?;
            Ok(self.factor() * seg.length(&well)?)
        };
        let s = self.solve_length_on_scan(ell, 1e-3, s_max, len_at)?;
        self.ramp_boundary_from_y(y_of(s), front)
    }

    fn solve_length_on_scan<F>(&self, ell: f64, s_lo: f64, s_hi: f64, len_at: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if !(ell > 0.0) {
            return Err(Error::InvalidParameter(format!("ell must be > 0, got {ell}")));
        }
        let n = 17;
        let mut ss = Vec::with_capacity(n);
        let mut ls = Vec::with_capacity(n);
        for i in 0..n {
            let s = s_lo + (s_hi - s_lo) * i as f64 / (n - 1) as f64;
            ss.push(s);
            ls.push(len_at(s)?);
        }
        let i_min = (0..n).min_by(|&i, &j| ls[i].total_cmp(&ls[j])).unwrap();
        // bracket the requested length right of the minimum
        let mut i_hi = None;
        for i in i_min..n {
            if ls[i] >= ell {
                i_hi = Some(i);
                break;
            }
        }
        let i_hi = match i_hi {
            Some(i) => i,
            None => {
                return Err(Error::Domain(format!(
                    "ell = {ell} exceeds the largest representable length {:.6} \
                     (turning value at the engine floor)",
                    ls[n - 1]
                )))
            }
        };
        if i_hi == i_min && ls[i_min] > ell {
            // requested length below everything seen right of the minimum:
            // refine the minimum to report it
            let step = (s_hi - s_lo) / (n - 1) as f64;
            let a = (ss[i_min] - step).max(s_lo);
            let b = (ss[i_min] + step).min(s_hi);
            let (_, l_min) = golden_min(|s| len_at(s).unwrap_or(f64::INFINITY), a, b, 1e-10, 200);
            if ell < l_min {
                return Err(Error::BelowMinimalLength {
                    requested: ell,
                    minimum: l_min,
                });
            }
            // between the refined minimum and the scan point: fall through
            // with the tight bracket
        }
        let (a, b) = if i_hi == i_min {
            (ss[i_min] - (s_hi - s_lo) / (n - 1) as f64, ss[i_hi])
        } else {
            (ss[i_hi - 1], ss[i_hi])
        };
        solve_bracketed(
            |s| len_at(s).map(|l| l - ell).unwrap_or(f64::NAN),
            a.max(s_lo),
            b,
            SolveTol {
                residual: 2e-10 * ell,
                argument: 0.0,
                max_iter: 200,
            },
            "time-map length solve",
        )
    }
}

/// Options for [`solve_mass_constraint`].
#[derive(Debug, Clone, Copy)]
pub struct MassConstraintOpts {
    /// samples in the returned profile
    pub n: usize,
    /// left endpoint margin of the mu bracket, as a fraction of `M - mu_bar`
    pub eps_r_frac: f64,
    pub convention: Convention,
}

impl Default for MassConstraintOpts {
    fn default() -> Self {
        Self {
            n: 2048,
            eps_r_frac: 1e-3,
            convention: Convention::Physical,
        }
    }
}

/// A full stationary triple `(u*, v*, w*)` of the reduced system with its
/// solved effective parameter `mu*`.
#[derive(Debug, Clone)]
pub struct StationaryTriple {
    pub profile: ProfileSolution,
    /// `v* = mu* - d u*` pointwise
    pub v: Vec<f64>,
    /// `w* = u*` pointwise
    pub w: Vec<f64>,
    pub m: f64,
    pub mu_star: f64,
    /// `<u*>` by the substituted quadrature route
    pub mean_u: f64,
    /// `M - mu* - (1 - d) <u*>`
    pub mass_residual: f64,
    /// sign changes of the constraint function seen on the coarse scan;
    /// more than one flags possible solution multiplicity
    pub constraint_sign_changes: usize,
}

impl StationaryTriple {
    /// Max-norm residual of the stationary two-field system
    /// `d u_xx + f(u, v) = 0`, `v_xx - f(u, v) = 0` with `w = u`, using the
    /// fourth-order Laplacian with reflective (Neumann) ghosts.
    pub fn full_residual_inf(&self) -> f64 {
        let p = &self.profile;
        let n = p.us.len();
        let dx = p.ell / (n - 1) as f64;
        let k2 = p.kappa * p.kappa;
        let f_react = |u: f64, v: f64| u * (u * v / (k2 * (1.0 + u)) - 1.0);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let f = f_react(p.us[i], self.v[i]);
            let r_u = p.d * profile::lap4(&p.us, i, dx) + f;
            let r_v = profile::lap4(&self.v, i, dx) - f;
            worst = worst.max(r_u.abs()).max(r_v.abs());
        }
        worst
    }
}

/// Solve the nonlocal constraint `H_M(mu) = <u(.; mu, ell)>` with
/// `H_M(mu) = (M - mu)/(1 - d)` for the spike branch, returning the full
/// triple. The bracket `[mu_bar + eps_r, M]` carries a guaranteed sign
/// change once `ell` is above the admissible threshold; its absence is
/// reported as a bracket error.
pub fn solve_mass_constraint(
    m: f64,
    ell: f64,
    d: f64,
    kappa: f64,
    opts: MassConstraintOpts,
) -> Result<StationaryTriple> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mass constraint requires 0 < d < 1, got {d}"
        )));
    }
    let mb = mu_bar(d, kappa)?;
    if !(m > mb) {
        return Err(Error::Domain(format!(
            "spike-branch mass constraint needs M > mu_bar = {mb}, got M = {m}"
        )));
    }
    let eps_r = opts.eps_r_frac * (m - mb);
    let mu_lo = mb + eps_r;
    let mu_hi = m;

    let eval = |mu: f64| -> Result<f64> {
        let nl = Nonlinearity::new(mu, d, kappa)?;
        let tm = TimeMap::with_convention(&nl, opts.convention);
        let b = tm.solve_xi(ell)?;
        let mean = tm.mean_u(&BranchBoundary::Spike(b), ell)?;
        Ok((m - mu) / (1.0 - d) - mean)
    };

    // coarse scan: verify the endpoint signs and count crossings
    let n_scan = 17;
    let mut mus = Vec::with_capacity(n_scan);
    let mut fs = Vec::with_capacity(n_scan);
    for i in 0..n_scan {
        let mu = mu_lo + (mu_hi - mu_lo) * i as f64 / (n_scan - 1) as f64;
        mus.push(mu);
        fs.push(eval(mu)?);
    }
    let sign_changes = fs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    if fs[0] <= 0.0 {
        return Err(Error::NoBracket {
            lo: mu_lo,
            hi: mu_hi,
            flo: fs[0],
            fhi: fs[n_scan - 1],
            context: format!(
                "mass constraint: <u> at mu_bar+eps_r exceeds H_M; \
                 ell = {ell} is below the admissible threshold for M = {m}"
            ),
        });
    }
    let cell = fs
        .windows(2)
        .position(|w| w[0].signum() != w[1].signum())
        .ok_or_else(|| Error::NoBracket {
            lo: mu_lo,
            hi: mu_hi,
            flo: fs[0],
            fhi: fs[n_scan - 1],
            context: "mass constraint: no sign change on the mu scan".into(),
        })?;

    let tol = SolveTol {
        residual: 0.5e-8 / (1.0 - d),
        argument: 0.0,
        max_iter: 200,
    };
    let mu_star = solve_bracketed(
        |mu| eval(mu).unwrap_or(f64::NAN),
        mus[cell],
        mus[cell + 1],
        tol,
        "mass constraint: H_M(mu) = <u>",
    )?;

    let nl = Nonlinearity::new(mu_star, d, kappa)?;
    let tm = TimeMap::with_convention(&nl, opts.convention);
    let boundary = BranchBoundary::Spike(tm.solve_xi(ell)?);
    let mean_u = tm.mean_u(&boundary, ell)?;
    let profile = tm.profile(&boundary, ell, opts.n)?;
    let v: Vec<f64> = profile.us.iter().map(|&u| mu_star - d * u).collect();
    if let Some(bad) = v.iter().find(|&&x| x <= 0.0) {
        return Err(Error::Numerical(format!(
            "v* = mu* - d u* reached {bad} <= 0: contradicts the maximum principle; \
             this indicates a numerical bug"
        )));
    }
    let w = profile.us.clone();
    let mass_residual = m - mu_star - (1.0 - d) * mean_u;
    if mass_residual.abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "mass constraint residual {mass_residual:e} exceeds 1e-8"
        )));
    }
    Ok(StationaryTriple {
        profile,
        v,
        w,
        m,
        mu_star,
        mean_u,
        mass_residual,
        constraint_sign_changes: sign_changes,
    })
}
