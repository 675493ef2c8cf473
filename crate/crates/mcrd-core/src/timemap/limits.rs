//! Whole-line limit profiles: the homoclinic orbits the finite-domain
//! solutions converge to as `ell -> infinity`, and the heteroclinic front
//! at `mu = mu_bar`. Domains are `[0, x_max]` with the reflection convention
//! `u_x(0) = 0` for the homoclinics (peak or trough at `x = 0`).

use super::engine::{Quad, SpikeSeg, Weight, Well};
use super::profile::{finish_profile, ProfileBranch, ProfileMeta, ProfileSolution};
use super::Convention;
use crate::error::{Error, Result};
use crate::nonlinearity::{mu_bar, Nonlinearity};
use crate::numerics::rootfind::{solve_bracketed, SolveTol};
use crate::parallel;

/// Deepest tail value the limit profiles will resolve; beyond this the
/// asymptote is below working precision.
const U_FLOOR: f64 = 1e-290;

const CELL_ORDER: usize = 64;

fn solve_tol() -> SolveTol {
    SolveTol {
        residual: 0.0,
        argument: 1e-12,
        max_iter: 300,
    }
}

/// Homoclinic profile on `[0, x_max]`.
///
/// * `mu > mu_bar`: orbit asymptotic to 0 with peak `gamma(mu)` at `x = 0`
///   (the spike limit); monotone decreasing.
/// * `mu in (mu_c, mu_bar)`: orbit asymptotic to `beta(mu)` with minimum
///   `omega_*(mu)` at `x = 0`; monotone increasing.
///
/// Errors when `x_max` would push the tail below working precision of the
/// asymptote, and at `mu = mu_bar` (use [`heteroclinic_profile`]).
pub fn homoclinic_profile(nl: &Nonlinearity, x_max: f64, n: usize) -> Result<ProfileSolution> {
    if !(x_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let well = Well::new(nl)?;
    if nl.gamma().is_ok() {
        homoclinic_to_zero(nl, &well, x_max, n)
    } else if well.v_beta > 1e-10 * well.v_alpha.max(1.0) {
        homoclinic_to_beta(nl, &well, x_max, n)
    } else {
        Err(Error::Domain(
            "mu is at mu_bar within rounding: the orbit is the heteroclinic front".into(),
        ))
    }
}

fn homoclinic_to_zero(
    nl: &Nonlinearity,
    well: &Well,
    x_max: f64,
    n: usize,
) -> Result<ProfileSolution> {
    let factor = Convention::Physical.factor(nl.d());
    let seg = SpikeSeg::from_eta(well, 0.0)?;
    let k = n.clamp(64, 1024);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let alpha = well.alpha;
    let gamma = nl.gamma()?;

    // peak cells, theta-spaced in w = gamma - u
    let w_at = |j: usize| {
        let s = (half_pi * j as f64 / k as f64).sin();
        seg.delta + (seg.w_alpha - seg.delta) * s * s
    };
    let idx: Vec<usize> = (1..=k).collect();
    let peak_cells = parallel::map_collect(&idx, |&j| {
        well.peak_arc_spike(seg.delta, w_at(j - 1), w_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let mut data_x = vec![0.0];
    let mut data_u = vec![gamma - seg.delta];
    let mut acc = 0.0;
    for (j, c) in peak_cells.into_iter().enumerate() {
        acc += c?;
        data_x.push(factor * acc);
        data_u.push(gamma - w_at(j + 1));
    }
    let peak_len = factor * acc;

    if peak_len < x_max {
        // exponential tail: find how deep u(x_max) sits, then sample
        // geometrically down to it
        let x_of = |s: f64| -> Result<f64> {
            Ok(peak_len + factor * well.zero_tail_arc((-s).exp(), alpha, Weight::One, Quad::Adaptive)?)
        };
        let s_lo = -alpha.ln() + 1e-9;
        let s_hi = -U_FLOOR.ln();
        if x_of(s_hi)? < x_max {
            return Err(Error::Domain(format!(
                "x_max = {x_max} requires the tail below working precision \
                 (u < {U_FLOOR:e}) of the asymptote u = 0"
            )));
        }
        let s_end = solve_bracketed(
            |s| x_of(s).map(|x| x - x_max).unwrap_or(f64::NAN),
            s_lo,
            s_hi,
            solve_tol(),
            "homoclinic tail depth",
        )?;
        let u_at = |j: usize| (-(s_lo + (s_end - s_lo) * j as f64 / k as f64)).exp();
        let tail_cells = parallel::map_collect(&idx, |&j| {
            well.zero_tail_arc(u_at(j), u_at(j - 1), Weight::One, Quad::Fixed(CELL_ORDER))
        });
        for (j, c) in tail_cells.into_iter().enumerate() {
            acc += c?;
            data_x.push(factor * acc);
            data_u.push(u_at(j + 1));
        }
        // pin the numerically accumulated end onto the solved x_max
        let scale = x_max / (factor * acc);
        for x in data_x.iter_mut() {
            *x *= scale;
        }
    }

    let nl_c = nl.clone();
    finish_profile(
        data_x,
        data_u,
        n,
        move |u| u * u * nl_c.p_coeff(u),
        ProfileMeta {
            mu: nl.mu(),
            d: nl.d(),
            kappa: nl.kappa(),
            ell: x_max,
            branch: ProfileBranch::SpikeDecreasing,
            energy_level: 0.0,
            convention: Convention::Physical,
        },
    )
}

fn homoclinic_to_beta(
    nl: &Nonlinearity,
    well: &Well,
    x_max: f64,
    n: usize,
) -> Result<ProfileSolution> {
    let factor = Convention::Physical.factor(nl.d());
    let omega_star = nl.omega_star()?;
    if omega_star <= 0.0 {
        return Err(Error::Domain(
            "omega_* is at rounding level: mu is effectively mu_bar".into(),
        ));
    }
    let k = n.clamp(64, 1024);
    let alpha = well.alpha;
    let beta = well.beta;
    let span = beta - alpha;
    let t1 = (alpha / omega_star).acosh();

    // near-side cells from the minimum
    let t_at = |j: usize| t1 * j as f64 / k as f64;
    let idx: Vec<usize> = (1..=k).collect();
    let near_cells = parallel::map_collect(&idx, |&j| {
        well.lower_arc(omega_star, t_at(j - 1), t_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let mut data_x = vec![0.0];
    let mut data_u = vec![omega_star];
    let mut acc = 0.0;
    for (j, c) in near_cells.into_iter().enumerate() {
        acc += c?;
        data_x.push(factor * acc);
        data_u.push(omega_star * t_at(j + 1).cosh());
    }
    let near_len = factor * acc;

    if near_len < x_max {
        let x_of = |s: f64| -> Result<f64> {
            Ok(near_len + factor * well.beta_tail_arc((-s).exp(), span, Weight::One, Quad::Adaptive)?)
        };
        let s_lo = -span.ln() + 1e-9;
        let s_hi = -U_FLOOR.ln();
        if x_of(s_hi)? < x_max {
            return Err(Error::Domain(format!(
                "x_max = {x_max} requires the tail below working precision \
                 (beta - u < {U_FLOOR:e}) of the asymptote u = beta"
            )));
        }
        let s_end = solve_bracketed(
            |s| x_of(s).map(|x| x - x_max).unwrap_or(f64::NAN),
            s_lo,
            s_hi,
            solve_tol(),
            "homoclinic-to-beta tail depth",
        )?;
        let y_at = |j: usize| (-(s_lo + (s_end - s_lo) * j as f64 / k as f64)).exp();
        let tail_cells = parallel::map_collect(&idx, |&j| {
            well.beta_tail_arc(y_at(j), y_at(j - 1), Weight::One, Quad::Fixed(CELL_ORDER))
        });
        for (j, c) in tail_cells.into_iter().enumerate() {
            acc += c?;
            data_x.push(factor * acc);
            data_u.push(beta - y_at(j + 1));
        }
        let scale = x_max / (factor * acc);
        for x in data_x.iter_mut() {
            *x *= scale;
        }
    }

    let v_beta = well.v_beta;
    let nl_c = nl.clone();
    let well_alpha = alpha;
    let q_at = {
        let well_local = Well::new(nl)?;
        move |y: f64| well_local.q_beta(y)
    };
    finish_profile(
        data_x,
        data_u,
        n,
        move |u| {
            if u <= well_alpha {
                u * u * nl_c.p_coeff(u) - v_beta
            } else {
                let y = beta - u;
                y * y * q_at(y)
            }
        },
        ProfileMeta {
            mu: nl.mu(),
            d: nl.d(),
            kappa: nl.kappa(),
            ell: x_max,
            branch: ProfileBranch::Increasing,
            energy_level: -v_beta,
            convention: Convention::Physical,
        },
    )
}

/// Heteroclinic front at `mu = mu_bar(d, kappa)` on `[0, x_max]`, rising
/// from the `u = 0` side to the `u = beta(mu_bar)` side, anchored so that
/// `u(x_max / 2) = alpha(mu_bar)` (the steepest point). The potential level
/// at `beta` is pinned to its heteroclinic value of exactly zero.
pub fn heteroclinic_profile(d: f64, kappa: f64, x_max: f64, n: usize) -> Result<ProfileSolution> {
    if !(x_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let mb = mu_bar(d, kappa)?;
    let nl = Nonlinearity::new(mb, d, kappa)?;
    let well = Well::new(&nl)?;
    let factor = Convention::Physical.factor(d);
    let alpha = well.alpha;
    let beta = well.beta;
    let span = beta - alpha;
    let half = 0.5 * x_max;
    let k = n.clamp(64, 1024);
    let idx: Vec<usize> = (1..=k).collect();

    // left tail depth: u(0) with factor * \int_{u0}^{alpha} = half
    let left_of = |s: f64| -> Result<f64> {
        Ok(factor * well.zero_tail_arc((-s).exp(), alpha, Weight::One, Quad::Adaptive)?)
    };
    let s_hi = -U_FLOOR.ln();
    if left_of(s_hi)? < half {
        return Err(Error::Domain(format!(
            "x_max = {x_max} requires the left tail below working precision"
        )));
    }
    let s_left = solve_bracketed(
        |s| left_of(s).map(|x| x - half).unwrap_or(f64::NAN),
        -alpha.ln() + 1e-9,
        s_hi,
        solve_tol(),
        "heteroclinic left tail depth",
    )?;
    // right tail depth: beta - u(x_max)
    let right_of = |s: f64| -> Result<f64> {
        Ok(factor * well.beta_tail_arc((-s).exp(), span, Weight::One, Quad::Adaptive)?)
    };
    if right_of(s_hi)? < half {
        return Err(Error::Domain(format!(
            "x_max = {x_max} requires the right tail below working precision"
        )));
    }
    let s_right = solve_bracketed(
        |s| right_of(s).map(|x| x - half).unwrap_or(f64::NAN),
        -span.ln() + 1e-9,
        s_hi,
        solve_tol(),
        "heteroclinic right tail depth",
    )?;

    // left cells, u ascending from u(0) to alpha
    let s_alpha = -alpha.ln() + 1e-9;
    let u_at = |j: usize| (-(s_left + (s_alpha - s_left) * j as f64 / k as f64)).exp();
    let left_cells = parallel::map_collect(&idx, |&j| {
        well.zero_tail_arc(u_at(j - 1), u_at(j), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let mut left_cum = vec![0.0];
    let mut acc = 0.0;
    for c in left_cells {
        acc += c?;
        left_cum.push(acc);
    }
    let left_total = acc;

    let mut data_x = Vec::with_capacity(2 * k + 2);
    let mut data_u = Vec::with_capacity(2 * k + 2);
    let left_scale = half / (factor * left_total);
    for j in 0..=k {
        data_x.push(factor * left_cum[j] * left_scale);
        data_u.push(u_at(j));
    }

    // right cells, u ascending from alpha to beta - y_end
    let s_span = -span.ln() + 1e-9;
    let y_at = |j: usize| (-(s_span + (s_right - s_span) * j as f64 / k as f64)).exp();
    let right_cells = parallel::map_collect(&idx, |&j| {
        well.beta_tail_arc(y_at(j), y_at(j - 1), Weight::One, Quad::Fixed(CELL_ORDER))
    });
    let mut acc_r = 0.0;
    let mut right_cum = vec![0.0];
    for c in right_cells {
        acc_r += c?;
        right_cum.push(acc_r);
    }
    let right_scale = half / (factor * acc_r);
    for j in 1..=k {
        data_x.push(half + factor * right_cum[j] * right_scale);
        data_u.push(beta - y_at(j));
    }

    let nl_c = nl.clone();
    let q_at = {
        let well_local = Well::new(&nl)?;
        move |y: f64| well_local.q_beta(y)
    };
    finish_profile(
        data_x,
        data_u,
        n,
        move |u| {
            if u <= alpha {
                u * u * nl_c.p_coeff(u)
            } else {
                let y = beta - u;
                y * y * q_at(y)
            }
        },
        ProfileMeta {
            mu: mb,
            d,
            kappa,
            ell: x_max,
            branch: ProfileBranch::Front,
            energy_level: 0.0,
            convention: Convention::Physical,
        },
    )
}
