//! Linearized stability of the constant equilibria. The Neumann Laplacian
//! reduces the linearization to a family of 3x3 matrices indexed by its
//! eigenvalues `sigma`: lower-triangular `A_j` about `(0, M, 0)` and full
//! `B_j` about `(u_±, v_±, u_±)`. The characteristic cubic of `B_j` is
//! expanded in closed form and solved by radicals, with a Schur fallback
//! near multiple roots; steady (S) versus wave (W) instability follows the
//! complementary-subsystem test and the sign of `r(M) = u_+/v_+ - 1 + tau`.

use crate::error::{Error, Result};
use crate::nonlinearity::{critical_mass, u_plus};
use crate::numerics::cubic::cubic_roots_monic;
use crate::numerics::rootfind::{expand_bracket_up, solve_bracketed, SolveTol};
use crate::oracle;
use crate::parallel;
use crate::params::ReducedParams;
use num_complex::Complex64;
use serde::Serialize;

/// Which constant equilibrium a linearization refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Zero,
    Plus,
    Minus,
}

/// Data of the linearization about `(u_±, v_±, u_±)`:
/// `alpha0 = u/v`, `beta0 = u/(1+u)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearizationData {
    pub alpha0: f64,
    pub beta0: f64,
    pub tau: f64,
    pub d: f64,
    pub eps: f64,
    pub m: f64,
    pub kappa: f64,
    /// the equilibrium value of u this linearization is taken at
    pub u_eq: f64,
}

impl LinearizationData {
    /// Build from reduced parameters at the `u_+` (or `u_-`) equilibrium.
    pub fn new(params: &ReducedParams, branch: Branch) -> Result<Self> {
        params.validate()?;
        let up = u_plus(params.m, params.kappa)?;
        let u = match branch {
            Branch::Plus => up,
            Branch::Minus => params.kappa * params.kappa / up,
            Branch::Zero => {
                return Err(Error::Domain(
                    "linearization data alpha0/beta0 are defined at u_±, not (0, M, 0)".into(),
                ))
            }
        };
        let v = params.m - u;
        Ok(Self {
            alpha0: u / v,
            beta0: u / (1.0 + u),
            tau: params.tau,
            d: params.d,
            eps: params.eps,
            m: params.m,
            kappa: params.kappa,
            u_eq: u,
        })
    }

    /// `r(M) = alpha0 - 1 + tau` evaluated on this linearization.
    pub fn r(&self) -> f64 {
        self.alpha0 - 1.0 + self.tau
    }

    /// Sign quantity `alpha0 - 1 + beta0 = (u^2 - kappa^2)/(kappa^2 (1+u))`;
    /// positive at `u_+`, negative at `u_-`.
    pub fn sign_quantity(&self) -> f64 {
        self.alpha0 - 1.0 + self.beta0
    }
}

/// Jacobian of the reaction part at a constant equilibrium.
pub fn jacobian_at_equilibrium(branch: Branch, params: &ReducedParams) -> Result<[[f64; 3]; 3]> {
    params.validate()?;
    match branch {
        Branch::Zero => {
            let tau = params.tau;
            Ok([[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [tau, 0.0, -tau]])
        }
        Branch::Plus | Branch::Minus => {
            let lin = LinearizationData::new(params, branch)?;
            let (a0, b0, tau) = (lin.alpha0, lin.beta0, lin.tau);
            Ok([
                [1.0, a0, -b0],
                [-1.0, -a0, b0],
                [tau, 0.0, -tau],
            ])
        }
    }
}

/// Eigenvalues of the lower-triangular mode matrix `A_j` at Laplacian
/// eigenvalue `sigma`: exactly its diagonal `{-d sigma - 1, -sigma, -eps sigma - tau}`.
pub fn eig_a(sigma: f64, params: &ReducedParams) -> [f64; 3] {
    [
        -params.d * sigma - 1.0,
        -sigma,
        -params.eps * sigma - params.tau,
    ]
}

/// Mode matrix `B_j` at `sigma`, assembled entrywise (used by the oracle
/// route and the Schur fallback).
pub fn assemble_b(sigma: f64, lin: &LinearizationData) -> [[f64; 3]; 3] {
    [
        [-lin.d * sigma + 1.0, lin.alpha0, -lin.beta0],
        [-1.0, -sigma - lin.alpha0, lin.beta0],
        [lin.tau, 0.0, -lin.eps * sigma - lin.tau],
    ]
}

/// Monic characteristic coefficients `(c2, c1, c0)` of `B_j`,
/// `det(B_j - x I) = -(x^3 + c2 x^2 + c1 x + c0)`, from the closed-form
/// expansion. The constant term carries an overall factor `sigma`
/// (the mass-conservation zero mode at `sigma = 0`).
pub fn char_poly_b(sigma: f64, lin: &LinearizationData) -> (f64, f64, f64) {
    let (a0, b0, tau, d, eps) = (lin.alpha0, lin.beta0, lin.tau, lin.d, lin.eps);
    let c2 = (d + 1.0 + eps) * sigma - 1.0 + a0 + tau;
    let c1 = (d + eps * d + eps) * sigma * sigma
        + (-1.0 + d * a0 + tau * (d + 1.0) + eps * (a0 - 1.0)) * sigma
        + tau * (a0 - 1.0 + b0);
    let c0 = (eps * d * sigma * sigma
        + (tau * d + eps * (-1.0 + d * a0)) * sigma
        + tau * (-1.0 + d * a0 + b0))
        * sigma;
    (c2, c1, c0)
}

/// Relative-discriminant threshold below which the closed-form cubic hands
/// over to the Schur oracle (avoids spurious imaginary parts at S/W borders).
const DISC_FALLBACK: f64 = 1e-12;

/// Eigenvalues of `B_j` at `sigma`, sorted by real part descending.
pub fn eig_b(sigma: f64, lin: &LinearizationData) -> [Complex64; 3] {
    let (c2, c1, c0) = char_poly_b(sigma, lin);
    let cubic = cubic_roots_monic(c2, c1, c0);
    let mut roots = if cubic.disc_rel() < DISC_FALLBACK {
        oracle::eig3(assemble_b(sigma, lin))
    } else {
        cubic.roots
    };
    roots.sort_by(|a, b| b.re.total_cmp(&a.re));
    roots
}

/// `r(M) = u_+/v_+ - 1 + tau`; defined for `M >= M_c` (at `M_c` it equals
/// `tau - kappa/(kappa+1)`).
pub fn r_of_m(m: f64, kappa: f64, tau: f64) -> Result<f64> {
    let mc = critical_mass(kappa);
    if m < mc {
        return Err(Error::Domain(format!(
            "r(M) needs M >= M_c = {mc}, got M = {m}"
        )));
    }
    let u = if m == mc {
        kappa
    } else {
        u_plus(m, kappa)?
    };
    Ok(u / (m - u) - 1.0 + tau)
}

/// Threshold `M_*` with `r(M_*) = 0`, which exists exactly when
/// `r(M_c) = tau - kappa/(kappa+1) < 0`. `r` is strictly increasing in `M`,
/// so the bracket is expanded upward until the sign flips.
pub fn m_star(kappa: f64, tau: f64) -> Result<Option<f64>> {
    let mc = critical_mass(kappa);
    let r_mc = tau - kappa / (kappa + 1.0);
    if r_mc >= 0.0 {
        return Ok(None);
    }
    let f = |m: f64| r_of_m(m, kappa, tau).unwrap_or(f64::NAN);
    let (lo, hi) = expand_bracket_up(f, mc, 2.0 * mc, 2.0, 80, "M_*: r(M) sign change")?;
    let m = solve_bracketed(
        f,
        lo,
        hi,
        SolveTol {
            residual: 1e-14,
            argument: 0.0,
            max_iter: 300,
        },
        "M_*: r(M) = 0",
    )?;
    Ok(Some(m))
}

/// Instability character per the complementary-subsystem criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InstabilityKind {
    #[serde(rename = "none")]
    None,
    S,
    W,
    #[serde(rename = "S-and-W")]
    SAndW,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InstabilityClassification {
    pub uniform_stable: bool,
    pub kind: InstabilityKind,
    pub crossing_sigma: Option<f64>,
}

/// Subsystem test data: the scalar block `J_2 = -u_+/v_+` (always stable,
/// discarded) and the 2x2 block `J_13` with `tr = 1 - tau`,
/// `det = -tau/(1+u_+) < 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SubsystemReport {
    pub j2: f64,
    pub tr_j13: f64,
    pub det_j13: f64,
    pub classification: InstabilityClassification,
}

/// Steady/wave classification at `u_+` for small diffusion, valid under
/// uniform stability (`alpha0 - 1 + beta0 > 0` and `r(M) > 0`):
/// S-instability when `tau >= 1`, both S and W when `tau < 1`.
pub fn subsystem_classification(lin: &LinearizationData) -> Result<SubsystemReport> {
    if lin.sign_quantity() <= 0.0 || lin.r() <= 0.0 {
        return Err(Error::Domain(format!(
            "subsystem classification requires uniform stability: alpha0-1+beta0 = {:e}, r(M) = {:e}",
            lin.sign_quantity(),
            lin.r()
        )));
    }
    let kind = if lin.tau >= 1.0 {
        InstabilityKind::S
    } else {
        InstabilityKind::SAndW
    };
    Ok(SubsystemReport {
        j2: -lin.alpha0,
        tr_j13: 1.0 - lin.tau,
        det_j13: -lin.tau / (1.0 + lin.u_eq),
        classification: InstabilityClassification {
            uniform_stable: true,
            kind,
            crossing_sigma: None,
        },
    })
}

/// One wavenumber sample of the dispersion relation.
#[derive(Debug, Clone, Serialize)]
pub struct DispersionPoint {
    pub sigma: f64,
    /// eigenvalues of `B_j`, conjugation-closed, sorted by real part descending
    pub eigenvalues: [(f64, f64); 3],
    pub max_real: f64,
    /// Neumann mode index j when sigma = (j pi / ell)^2 came from the interval
    pub neumann_index: Option<usize>,
}

/// Character of the dominant eigenvalue at a zero crossing of the growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossingKind {
    Steady,
    Wave,
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionReport {
    pub points: Vec<DispersionPoint>,
    pub uniform_stable: bool,
    /// Proposition-style classification from the subsystem test (when uniform
    /// stability holds); `None` kind otherwise.
    pub kind: InstabilityKind,
    pub max_growth: f64,
    pub argmax_sigma: f64,
    /// first zero crossing of the growth rate at sigma > 0, refined by bisection
    pub crossing_sigma: Option<f64>,
    /// real-vs-complex character of the crossing eigenvalue
    pub crossing_kind: Option<CrossingKind>,
}

/// Relative imaginary-part tolerance separating real from complex crossings.
const TOL_IM: f64 = 1e-8;

fn max_real_at(sigma: f64, lin: &LinearizationData) -> f64 {
    eig_b(sigma, lin)[0].re
}

/// Scan the dispersion relation on a uniform grid over `[0, sigma_max]`
/// (plus the Neumann modes `(j pi / ell)^2` when `ell` is given). Grid points
/// are evaluated in parallel and assembled in input order.
pub fn dispersion_scan(
    lin: &LinearizationData,
    sigma_max: f64,
    n_sigma: usize,
    ell: Option<f64>,
) -> Result<DispersionReport> {
    if !(sigma_max > 0.0) || n_sigma < 2 {
        return Err(Error::InvalidParameter(
            "dispersion scan needs sigma_max > 0 and n_sigma >= 2".into(),
        ));
    }
    let mut grid: Vec<(f64, Option<usize>)> = (0..n_sigma)
        .map(|i| (sigma_max * i as f64 / (n_sigma - 1) as f64, None))
        .collect();
    if let Some(ell) = ell {
        let mut j = 0usize;
        loop {
            let s = (j as f64 * std::f64::consts::PI / ell).powi(2);
            if s > sigma_max {
                break;
            }
            grid.push((s, Some(j)));
            j += 1;
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    grid.dedup_by(|a, b| a.0 == b.0 && {
        b.1 = b.1.or(a.1);
        true
    });

    let points: Vec<DispersionPoint> = parallel::map_collect(&grid, |&(sigma, neumann_index)| {
        let ev = eig_b(sigma, lin);
        DispersionPoint {
            sigma,
            eigenvalues: [
                (ev[0].re, ev[0].im),
                (ev[1].re, ev[1].im),
                (ev[2].re, ev[2].im),
            ],
            max_real: ev[0].re,
            neumann_index,
        }
    });

    // uniform stability from the sigma = 0 factorization
    // -x (x^2 + (alpha0 - 1 + tau) x + tau (alpha0 - 1 + beta0))
    let uniform_stable = lin.r() > 0.0 && lin.sign_quantity() > 0.0;

    let mut max_growth = f64::NEG_INFINITY;
    let mut argmax_sigma = 0.0;
    for p in points.iter().filter(|p| p.sigma > 0.0) {
        if p.max_real > max_growth {
            max_growth = p.max_real;
            argmax_sigma = p.sigma;
        }
    }

    // first sign change of the growth rate at positive sigma
    let mut crossing_sigma = None;
    let mut crossing_kind = None;
    for w in points.windows(2) {
        let (p0, p1) = (&w[0], &w[1]);
        if p0.sigma <= 0.0 || p0.sigma == p1.sigma {
            continue;
        }
        if p0.max_real.signum() != p1.max_real.signum() && p0.max_real != 0.0 {
            let s = solve_bracketed(
                |s| max_real_at(s, lin),
                p0.sigma,
                p1.sigma,
                SolveTol {
                    residual: 0.0,
                    argument: 1e-12 * p1.sigma,
                    max_iter: 200,
                },
                "dispersion crossing",
            )?;
            let dominant = eig_b(s, lin)[0];
            crossing_sigma = Some(s);
            crossing_kind = Some(if dominant.im.abs() > TOL_IM * (1.0 + dominant.norm()) {
                CrossingKind::Wave
            } else {
                CrossingKind::Steady
            });
            break;
        }
    }

    let kind = if !uniform_stable {
        InstabilityKind::None
    } else if max_growth > 0.0 {
        subsystem_classification(lin)?.classification.kind
    } else {
        InstabilityKind::None
    };

    Ok(DispersionReport {
        points,
        uniform_stable,
        kind,
        max_growth,
        argmax_sigma,
        crossing_sigma,
        crossing_kind,
    })
}

/// Largest diffusion pair (by `max(d, eps)`) on a log grid at which the
/// dispersion relation still shows positive growth at some `sigma > 0`.
/// Quantifies the proposition's "small diffusion" hypothesis for concrete
/// parameters instead of guessing a bound.
pub fn turing_persistence(
    kappa: f64,
    tau: f64,
    m: f64,
    sigma_max: f64,
) -> Result<Option<(f64, f64)>> {
    let mut best: Option<(f64, f64)> = None;
    for i in 0..25 {
        let d = 10f64.powf(-4.0 + 4.0 * i as f64 / 24.0);
        for j in 0..25 {
            let eps = 10f64.powf(-5.0 + 5.0 * j as f64 / 24.0);
            let params = ReducedParams {
                kappa,
                tau,
                d,
                eps,
                m,
                ell: 1.0,
            };
            let lin = match LinearizationData::new(&params, Branch::Plus) {
                Ok(l) => l,
                Err(_) => continue,
            };
            if lin.r() <= 0.0 || lin.sign_quantity() <= 0.0 {
                continue;
            }
            let rep = dispersion_scan(&lin, sigma_max, 200, None)?;
            if rep.max_growth > 0.0 {
                let cur = d.max(eps);
                if best.map_or(true, |(bd, be)| cur > bd.max(be)) {
                    best = Some((d, eps));
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_params() -> ReducedParams {
        ReducedParams::new(2.5, 0.8, 0.01, 0.001, 22.0, 100.0).unwrap()
    }

    fn lin_plus(p: &ReducedParams) -> LinearizationData {
        LinearizationData::new(p, Branch::Plus).unwrap()
    }

    #[test]
    fn jacobian_zero_structure() {
        let p = fig2_params();
        let j = jacobian_at_equilibrium(Branch::Zero, &p).unwrap();
        assert_eq!(j[0], [-1.0, 0.0, 0.0]);
        assert_eq!(j[1], [1.0, 0.0, 0.0]);
        assert_eq!(j[2], [0.8, 0.0, -0.8]);
    }

    #[test]
    fn jacobian_plus_rows_cancel() {
        let p = fig2_params();
        let j = jacobian_at_equilibrium(Branch::Plus, &p).unwrap();
        for c in 0..3 {
            assert!((j[0][c] + j[1][c]).abs() < 1e-15, "col {c}");
        }
        // J[0][0] = 1 via u v / (kappa^2 (1+u)) = 1
        assert_eq!(j[0][0], 1.0);
        let lin = lin_plus(&p);
        let u = lin.u_eq;
        let v = p.m - u;
        assert!((u * v / (p.kappa * p.kappa * (1.0 + u)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_pm_requires_mass() {
        let p = ReducedParams::new(2.0, 0.8, 0.1, 0.0, 4.0, 1.0).unwrap(); // M < M_c = 8
        assert!(jacobian_at_equilibrium(Branch::Plus, &p).is_err());
    }

    #[test]
    fn eig_a_values() {
        let p = fig2_params();
        let e0 = eig_a(0.0, &p);
        assert_eq!(e0, [-1.0, 0.0, -0.8]);
        for sigma in [0.3, 2.0, 50.0] {
            for v in eig_a(sigma, &p) {
                assert!(v < 0.0);
            }
        }
        let p1 = ReducedParams::new(2.0, 1.0, 1.0, 1.0, 22.0, 1.0).unwrap();
        assert_eq!(eig_a(1.0, &p1), [-2.0, -1.0, -2.0]);
    }

    #[test]
    fn char_poly_sigma0_factorization() {
        let p = fig2_params();
        let lin = lin_plus(&p);
        let (c2, c1, c0) = char_poly_b(0.0, &lin);
        assert_eq!(c0, 0.0); // mass-conservation zero mode
        assert!((c2 - (lin.alpha0 - 1.0 + lin.tau)).abs() < 1e-14);
        assert!((c1 - lin.tau * (lin.alpha0 - 1.0 + lin.beta0)).abs() < 1e-14);
        // -1 + beta0 = -1/(1+u_+)
        assert!((-1.0 + lin.beta0 + 1.0 / (1.0 + lin.u_eq)).abs() < 1e-14);
    }

    #[test]
    fn char_poly_matches_determinant_oracle() {
        let p = fig2_params();
        for branch in [Branch::Plus, Branch::Minus] {
            let lin = LinearizationData::new(&p, branch).unwrap();
            for sigma in [0.0, 0.17, 1.0, 4.35, 20.0] {
                let (c2, c1, c0) = char_poly_b(sigma, &lin);
                let (o2, o1, o0) = oracle::char_poly3(assemble_b(sigma, &lin));
                let scale = |x: f64| x.abs().max(1.0);
                assert!((c2 - o2).abs() < 1e-10 * scale(o2), "sigma={sigma}");
                assert!((c1 - o1).abs() < 1e-10 * scale(o1), "sigma={sigma}");
                assert!((c0 - o0).abs() < 1e-10 * scale(o0), "sigma={sigma}");
            }
        }
    }

    #[test]
    fn eig_b_sigma0_zero_mode_and_stability() {
        let p = fig2_params();
        let lin = lin_plus(&p);
        assert!(lin.sign_quantity() > 0.0 && lin.r() > 0.0);
        let ev = eig_b(0.0, &lin);
        // one zero root, two with negative real parts
        assert!(ev[0].re.abs() < 1e-12);
        assert!(ev[1].re < 0.0 && ev[2].re < 0.0);
        // conjugate closure
        let sum_im: f64 = ev.iter().map(|z| z.im).sum();
        assert!(sum_im.abs() < 1e-12);
    }

    #[test]
    fn eig_b_agrees_with_schur_oracle() {
        let p = fig2_params();
        let lin = lin_plus(&p);
        for sigma in [0.0, 0.5, 2.0, 4.0, 10.0, 100.0] {
            let mut fast = eig_b(sigma, &lin).to_vec();
            let mut slow = oracle::eig3(assemble_b(sigma, &lin)).to_vec();
            fast.sort_by(|a, b| (b.re, b.im).partial_cmp(&(a.re, a.im)).unwrap());
            slow.sort_by(|a, b| (b.re, b.im).partial_cmp(&(a.re, a.im)).unwrap());
            for (f, s) in fast.iter().zip(&slow) {
                let scale = 1.0 + s.norm();
                assert!((f - s).norm() < 1e-9 * scale, "sigma={sigma}: {f} vs {s}");
            }
        }
    }

    #[test]
    fn minus_branch_always_unstable() {
        for m in [8.5, 10.0, 22.0, 100.0] {
            let p = ReducedParams::new(2.0, 0.8, 0.1, 0.0, m, 1.0).unwrap();
            let lin = LinearizationData::new(&p, Branch::Minus).unwrap();
            assert!(lin.sign_quantity() < 0.0, "M={m}");
        }
    }

    #[test]
    fn r_values_and_m_star() {
        // Fig 2: r(M_c) = 0.8 - 2.5/3.5 > 0 -> no M_*
        let r = r_of_m(critical_mass(2.5), 2.5, 0.8).unwrap();
        assert!((r - (0.8 - 2.5 / 3.5)).abs() < 1e-14);
        assert!(m_star(2.5, 0.8).unwrap().is_none());

        // k_I = 0.3, k_N = 2: r(M_c) = 0.3 - 2/2.3 < 0 -> M_* exists
        let kappa = 20.0 / 3.0;
        let tau = 0.3;
        let r = r_of_m(critical_mass(kappa), kappa, tau).unwrap();
        assert!((r - (0.3 - 2.0 / 2.3)).abs() < 1e-13);
        assert!(r < 0.0);
        let ms = m_star(kappa, tau).unwrap().unwrap();
        assert!(ms > critical_mass(kappa));
        assert!(r_of_m(ms, kappa, tau).unwrap().abs() < 1e-10);

        // monotonicity
        let r1 = r_of_m(60.0, 2.5, 0.3).unwrap();
        let r2 = r_of_m(80.0, 2.5, 0.3).unwrap();
        assert!(r2 > r1);
    }

    #[test]
    fn proposition_classification() {
        let mut p = fig2_params();
        let rep = subsystem_classification(&lin_plus(&p)).unwrap();
        assert_eq!(rep.classification.kind, InstabilityKind::SAndW); // tau = 0.8 < 1
        assert!(rep.j2 < 0.0);
        assert!(rep.det_j13 < 0.0);
        assert!((rep.tr_j13 - 0.2).abs() < 1e-14);

        p.tau = 1.5;
        let rep = subsystem_classification(&lin_plus(&p)).unwrap();
        assert_eq!(rep.classification.kind, InstabilityKind::S);

        // classification undefined without uniform stability
        let p_bad = ReducedParams::new(20.0 / 3.0, 0.3, 0.1, 0.0, 60.0, 1.0).unwrap();
        let lin = LinearizationData::new(&p_bad, Branch::Plus).unwrap();
        assert!(lin.r() < 0.0);
        assert!(subsystem_classification(&lin).is_err());
    }

    #[test]
    fn fig2_dispersion_shows_turing_band() {
        let p = fig2_params();
        let lin = lin_plus(&p);
        let rep = dispersion_scan(&lin, 8.0, 400, Some(100.0)).unwrap();
        assert!(rep.uniform_stable);
        assert!(rep.max_growth > 0.0, "expected positive growth");
        assert!(rep.argmax_sigma > 0.0);
        assert_eq!(rep.kind, InstabilityKind::SAndW);
        // the unstable band closes: a crossing exists and it is steady here
        assert!(rep.crossing_sigma.is_some());
        assert_eq!(rep.crossing_kind, Some(CrossingKind::Steady));
        // sigma = 0 keeps the conservation zero mode and nothing positive
        let p0 = &rep.points[0];
        assert_eq!(p0.sigma, 0.0);
        assert!(p0.max_real.abs() < 1e-10);
        // conjugation symmetry at every sigma
        for pt in &rep.points {
            let im_sum: f64 = pt.eigenvalues.iter().map(|e| e.1).sum();
            assert!(im_sum.abs() < 1e-9, "sigma={}", pt.sigma);
        }
        // Neumann modes were merged in
        assert!(rep.points.iter().any(|p| p.neumann_index == Some(3)));
    }

    #[test]
    fn equal_diffusion_is_stable() {
        let p = ReducedParams::new(2.5, 0.8, 1.0, 1.0, 22.0, 100.0).unwrap();
        let lin = lin_plus(&p);
        let rep = dispersion_scan(&lin, 8.0, 300, None).unwrap();
        assert!(rep.uniform_stable);
        assert!(rep.max_growth <= 0.0, "max growth {}", rep.max_growth);
        assert_eq!(rep.kind, InstabilityKind::None);
    }

    #[test]
    fn vieta_on_scan_grid() {
        let p = fig2_params();
        let lin = lin_plus(&p);
        for i in 0..60 {
            let sigma = 8.0 * i as f64 / 59.0;
            let (c2, c1, c0) = char_poly_b(sigma, &lin);
            let ev = eig_b(sigma, &lin);
            let sum: Complex64 = ev.iter().sum();
            let prod: Complex64 = ev.iter().product();
            let pair = ev[0] * ev[1] + ev[0] * ev[2] + ev[1] * ev[2];
            let s = 1.0 + c2.abs() + c1.abs() + c0.abs();
            assert!((sum.re + c2).abs() < 1e-9 * s && sum.im.abs() < 1e-9 * s);
            assert!((pair.re - c1).abs() < 1e-9 * s && pair.im.abs() < 1e-9 * s);
            assert!((prod.re + c0).abs() < 1e-9 * s && prod.im.abs() < 1e-9 * s);
        }
    }

    #[test]
    fn persistence_scan_reports_small_diffusion() {
        let best = turing_persistence(2.5, 0.8, 22.0, 8.0).unwrap();
        let (d, eps) = best.expect("instability should persist somewhere on the grid");
        assert!(d.max(eps) <= 1.0);
        assert!(d.max(eps) > 0.01); // persists at least through the Fig 2 regime
    }
}
