//! Monotone profile reconstruction: sample `x(u)` cumulatively along the
//! engine's parametrizations, invert by monotone cubic interpolation onto a
//! uniform grid, and carry the first-integral derivative with each sample.

use super::engine::{Quad, SpikeSeg, Weight, Well};
use super::{BranchBoundary, Convention, TimeMap};
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::numerics::interp::MonotoneCubic;
use crate::parallel;
use serde::Serialize;

/// Which monotone branch a profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileBranch {
    /// decreasing on `[0, ell]`, peak at `x = 0` (spike half)
    SpikeDecreasing,
    /// increasing on `[0, ell]`
    Increasing,
    /// increasing heteroclinic-limit branch at `mu = mu_bar`
    Front,
}

/// A sampled stationary profile of `d u_xx + g(u; mu) = 0` on `[0, ell]`.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    /// uniform sample positions, `xs[0] = 0`, `xs[n-1] = ell`
    pub xs: Vec<f64>,
    pub us: Vec<f64>,
    /// derivative from the first integral at each sample (sign per branch)
    pub ux: Vec<f64>,
    pub mu: f64,
    pub d: f64,
    pub kappa: f64,
    pub ell: f64,
    pub branch: ProfileBranch,
    /// u(0)
    pub boundary_value: f64,
    /// u(ell)
    pub endpoint: f64,
    /// the first-integral constant: G at the turning values
    pub energy_level: f64,
    pub convention: Convention,
}

impl ProfileSolution {
    pub fn nonlinearity(&self) -> Nonlinearity {
        Nonlinearity::new(self.mu, self.d, self.kappa).expect("profile carries valid parameters")
    }

    /// Trapezoid mean of `u` over the domain.
    pub fn mean_u(&self) -> f64 {
        trapezoid_mean(&self.us)
    }

    /// Relative spread of the discrete first integral
    /// `(d/2) u_x^2 + G(u)` along the profile (1/2 in place of d/2 under the
    /// paper-literal convention), normalized by the potential range seen.
    pub fn energy_spread_rel(&self) -> f64 {
        let nl = self.nonlinearity();
        let half = match self.convention {
            Convention::Physical => 0.5 * self.d,
            Convention::PaperLiteral => 0.5,
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut scale: f64 = 0.0;
        for (&u, &ux) in self.us.iter().zip(self.ux.iter()) {
            let g = nl.potential(u);
            let e = half * ux * ux + g;
            lo = lo.min(e);
            hi = hi.max(e);
            scale = scale.max(g.abs());
        }
        (hi - lo) / scale.max(f64::MIN_POSITIVE)
    }

    /// Max-norm of `d D2 u + g(u)` with the second-order centered Laplacian.
    pub fn residual_inf_2nd(&self) -> f64 {
        let nl = self.nonlinearity();
        let dx = self.ell / (self.us.len() - 1) as f64;
        residual_inf_2nd(&nl, &self.us, dx, self.d)
    }

    /// Max-norm of `d D2 u + g(u)` with the fourth-order centered Laplacian.
    pub fn residual_inf_4th(&self) -> f64 {
        let nl = self.nonlinearity();
        let dx = self.ell / (self.us.len() - 1) as f64;
        residual_inf_4th(&nl, &self.us, dx, self.d)
    }
}

/// Mean with trapezoid weights of uniform samples spanning the domain.
pub fn trapezoid_mean(values: &[f64]) -> f64 {
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    (0.5 * (values[0] + values[n - 1]) + inner) / (n - 1) as f64
}

/// Even-reflection sample access: Neumann profiles extend evenly, so ghost
/// values across either end are interior samples.
pub(crate) fn reflect(vals: &[f64], j: isize) -> f64 {
    let m = (vals.len() - 1) as isize;
    let j = j.rem_euclid(2 * m);
    let j = if j > m { 2 * m - j } else { j };
    vals[j as usize]
}

pub(crate) fn lap2(vals: &[f64], i: usize, dx: f64) -> f64 {
    let i = i as isize;
    (reflect(vals, i - 1) - 2.0 * reflect(vals, i) + reflect(vals, i + 1)) / (dx * dx)
}

pub(crate) fn lap4(vals: &[f64], i: usize, dx: f64) -> f64 {
    let i = i as isize;
    (-reflect(vals, i - 2) + 16.0 * reflect(vals, i - 1) - 30.0 * reflect(vals, i)
        + 16.0 * reflect(vals, i + 1)
        - reflect(vals, i + 2))
        / (12.0 * dx * dx)
}

/// Pointwise residual `d u_xx + g(u)` with the second-order Laplacian.
pub fn residual_2nd(nl: &Nonlinearity, us: &[f64], dx: f64, d: f64) -> Vec<f64> {
    (0..us.len())
        .map(|i| d * lap2(us, i, dx) + nl.g(us[i]))
        .collect()
}

pub fn residual_inf_2nd(nl: &Nonlinearity, us: &[f64], dx: f64, d: f64) -> f64 {
    residual_2nd(nl, us, dx, d)
        .into_iter()
        .fold(0.0f64, |a, r| a.max(r.abs()))
}

pub fn residual_inf_4th(nl: &Nonlinearity, us: &[f64], dx: f64, d: f64) -> f64 {
    (0..us.len())
        .map(|i| (d * lap4(us, i, dx) + nl.g(us[i])).abs())
        .fold(0.0f64, f64::max)
}

/// Fixed quadrature order for the narrow profile cells.
const CELL_ORDER: usize = 64;

/// Cumulative sums of per-cell integrals, evaluated in parallel.
fn cumulative(cells: Vec<Result<f64>>) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.push(0.0);
    for c in cells {
        acc += c?;
        out.push(acc);
    }
    Ok(out)
}

pub(crate) struct ProfileMeta {
    pub mu: f64,
    pub d: f64,
    pub kappa: f64,
    pub ell: f64,
    pub branch: ProfileBranch,
    pub energy_level: f64,
    pub convention: Convention,
}

/// Invert sampled `(x, u)` data (x ascending, u monotone) onto a uniform
/// grid of `n` samples and attach the first-integral derivative
/// `|u_x| = sqrt(2 dv / d)` (physical) with `dv = level - G(u) >= 0`.
pub(crate) fn finish_profile<F>(
    mut data_x: Vec<f64>,
    mut data_u: Vec<f64>,
    n: usize,
    dv_of_u: F,
    meta: ProfileMeta,
) -> Result<ProfileSolution>
where
    F: Fn(f64) -> f64,
{
    if n < 16 {
        return Err(Error::InvalidParameter(format!(
            "profiles need n >= 16 samples, got {n}"
        )));
    }
    // drop duplicate abscissae from cell rounding
    let mut keep = vec![true; data_x.len()];
    for i in 1..data_x.len() {
        if data_x[i] <= data_x[i - 1] + 1e-14 * meta.ell {
            keep[i] = true;
            // keep the later point, drop the earlier duplicate instead so the
            // exact endpoints survive
            keep[i - 1] = false;
        }
    }
    let mut xi = 0;
    data_x.retain(|_| {
        let k = keep[xi];
        xi += 1;
        k
    });
    let mut ui = 0;
    data_u.retain(|_| {
        let k = keep[ui];
        ui += 1;
        k
    });

    let interp = MonotoneCubic::new(data_x, data_u)?;
    let xs: Vec<f64> = (0..n).map(|i| meta.ell * i as f64 / (n - 1) as f64).collect();
    let us: Vec<f64> = xs.iter().map(|&x| interp.eval(x)).collect();
    let denom = match meta.convention {
        Convention::Physical => meta.d,
        Convention::PaperLiteral => 1.0,
    };
    let sign = match meta.branch {
        ProfileBranch::SpikeDecreasing => -1.0,
        ProfileBranch::Increasing | ProfileBranch::Front => 1.0,
    };
    let ux: Vec<f64> = us
        .iter()
        .map(|&u| sign * (2.0 * dv_of_u(u).max(0.0) / denom).sqrt())
        .collect();
    let boundary_value = us[0];
    let endpoint = us[n - 1];
    Ok(ProfileSolution {
        xs,
        us,
        ux,
        mu: meta.mu,
        d: meta.d,
        kappa: meta.kappa,
        ell: meta.ell,
        branch: meta.branch,
        boundary_value,
        endpoint,
        energy_level: meta.energy_level,
        convention: meta.convention,
    })
}

pub(crate) fn build_profile(
    tm: &TimeMap,
    boundary: &BranchBoundary,
    ell: f64,
    n: usize,
) -> Result<ProfileSolution> {
    let nl = tm.nonlinearity();
    let well = Well::new(nl)?;
    let factor = tm.convention().factor(nl.d());
    let cells_per_half = n.clamp(64, 1024);

    match boundary {
        BranchBoundary::Spike(b) => {
            let seg = b.seg;
            if seg.eta == 0.0 {
                return Err(Error::Domain(
                    "homoclinic boundary has no finite-domain profile; use homoclinic_profile"
                        .into(),
                ));
            }
            build_spike(&well, &seg, b.xi, factor, ell, n, cells_per_half, tm.convention())
        }
        BranchBoundary::Ramp(b) => build_ramp(&well, b, factor, ell, n, cells_per_half, tm.convention()),
    }
}

#[allow(clippy::too_many_arguments)]
fn build_spike(
    well: &Well,
    seg: &SpikeSeg,
    xi: f64,
    factor: f64,
    ell: f64,
    n: usize,
    k: usize,
    convention: Convention,
) -> Result<ProfileSolution> {
    let gamma = well.nl.gamma()?;
    // peak side: w = delta + (w_alpha - delta) sin^2(theta), theta uniform
    let half_pi = std::f64::consts::FRAC_PI_2;
    let w_at = |j: usize| {
        let s = (half_pi * j as f64 / k as f64).sin();
        seg.delta + (seg.w_alpha - seg.delta) * s * s
    };
    let idx: Vec<usize> = (1..=k).collect();
    let top_cells = parallel::map_collect(&idx, |&j| {
        well.peak_arc_spike(seg.delta, w_at(j - 1), w_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let top_cum = cumulative(top_cells)?;

    // trough side: t uniform in [0, t1], z = eta cosh t
    let t_at = |j: usize| seg.t1 * j as f64 / k as f64;
    let bot_cells = parallel::map_collect(&idx, |&j| {
        well.lower_arc(seg.eta, t_at(j - 1), t_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let bot_cum = cumulative(bot_cells)?;

    let ell_data = factor * (top_cum[k] + bot_cum[k]);
    if (ell - ell_data).abs() > 1e-6 * ell {
        return Err(Error::Domain(format!(
            "requested ell = {ell} inconsistent with boundary segment length {ell_data}"
        )));
    }
    let scale = ell / ell_data;

    let mut data_x = Vec::with_capacity(2 * k + 1);
    let mut data_u = Vec::with_capacity(2 * k + 1);
    for j in 0..=k {
        data_x.push(factor * top_cum[j] * scale);
        data_u.push(if j == 0 { xi } else { gamma - w_at(j) });
    }
    for j in (0..k).rev() {
        data_x.push(ell - factor * bot_cum[j] * scale);
        data_u.push(seg.eta * t_at(j).cosh());
    }

    let v_eta = seg.v_eta;
    let nl = well.nl.clone();
    finish_profile(
        data_x,
        data_u,
        n,
        move |u| u * u * nl.p_coeff(u) - v_eta,
        ProfileMeta {
            mu: well.nl.mu(),
            d: well.nl.d(),
            kappa: well.nl.kappa(),
            ell,
            branch: ProfileBranch::SpikeDecreasing,
            energy_level: -seg.v_eta,
            convention,
        },
    )
}

fn build_ramp(
    well: &Well,
    b: &super::RampBoundary,
    factor: f64,
    ell: f64,
    n: usize,
    k: usize,
    convention: Convention,
) -> Result<ProfileSolution> {
    let seg = b.seg;
    // near side: t uniform, z = omega cosh t
    let t_at = |j: usize| seg.t1 * j as f64 / k as f64;
    let idx: Vec<usize> = (1..=k).collect();
    let near_cells = parallel::map_collect(&idx, |&j| {
        well.lower_arc(seg.omega, t_at(j - 1), t_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let near_cum = cumulative(near_cells)?;

    // far side: t' uniform, beta - z = y cosh t'
    let tt_at = |j: usize| seg.t2 * j as f64 / k as f64;
    let far_cells = parallel::map_collect(&idx, |&j| {
        well.far_arc_ramp(seg.y, tt_at(j - 1), tt_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let far_cum = cumulative(far_cells)?;

    let ell_data = factor * (near_cum[k] + far_cum[k]);
    if (ell - ell_data).abs() > 1e-6 * ell {
        return Err(Error::Domain(format!(
            "requested ell = {ell} inconsistent with boundary segment length {ell_data}"
        )));
    }
    let scale = ell / ell_data;

    let mut data_x = Vec::with_capacity(2 * k + 1);
    let mut data_u = Vec::with_capacity(2 * k + 1);
    for j in 0..=k {
        data_x.push(factor * near_cum[j] * scale);
        data_u.push(seg.omega * t_at(j).cosh());
    }
    for j in (0..k).rev() {
        data_x.push(ell - factor * far_cum[j] * scale);
        data_u.push(well.beta - seg.y * tt_at(j).cosh());
    }

    let s_level = seg.s_level;
    let nl = well.nl.clone();
    let branch = if seg.front {
        ProfileBranch::Front
    } else {
        ProfileBranch::Increasing
    };
    finish_profile(
        data_x,
        data_u,
        n,
        move |u| u * u * nl.p_coeff(u) - s_level,
        ProfileMeta {
            mu: well.nl.mu(),
            d: well.nl.d(),
            kappa: well.nl.kappa(),
            ell,
            branch,
            energy_level: -s_level,
            convention,
        },
    )
}
