//! Numerical toolbox for a mass-conserved three-component reaction-diffusion
//! model of actin waves.
//!
//! The crate is organized around the reduced scalar problem
//! `d u_xx + g(u; mu) = 0` on `(0, ell)` with Neumann ends and the nonlocal
//! constraint `mu = M - (1 - d)<u>`:
//!
//! * [`params`] — physical `(N, S, I)` constants and the change of variables
//!   to the reduced `(u, v, w)` system.
//! * [`nonlinearity`] — the reduced nonlinearity `g`, its potential `G`, and
//!   every special point of the stationary theory (`mu_c`, `alpha`, `beta`,
//!   `gamma`, `mu_bar`, `mu_1`, `eta`, `omega_*`, `chi`, `h`).
//! * [`stability`] — linearization about the constant equilibria, the
//!   characteristic cubic of the mode matrices, the `r(M)` criterion and
//!   steady/wave instability classification.
//! * [`timemap`] — singular time-map quadrature, profile reconstruction,
//!   the mass-constraint solve and homoclinic/heteroclinic limits.
//! * [`multimode`] — reflection/concatenation of a base profile into
//!   multi-spike and multi-front equilibria.
//! * [`pdesim`] — method-of-lines simulator (IMEX Crank-Nicolson or RK4)
//!   for the full and auxiliary systems, with mass monitoring.
//! * [`oracle`] — independent reference routes (shooting, dense scans,
//!   companion-matrix eigenvalues) used by the self-test suite.
//!
//! Grid sweeps and per-sample quadratures run on rayon when the default
//! `parallel` feature is enabled; disabling it yields a fully sequential
//! build with identical results.

pub mod error;
pub mod multimode;
pub mod nonlinearity;
pub mod numerics;
pub mod oracle;
pub mod parallel;
pub mod params;
pub mod pdesim;
pub mod stability;
pub mod timemap;

pub use error::{Error, Result};
