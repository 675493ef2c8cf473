//! scratch probe (dev only)
use mcrd_core::nonlinearity::{mu_bar, mu_c, Nonlinearity};
use mcrd_core::timemap::TimeMap;
use std::time::Instant;

fn main() {
    let d = 0.1;
    let kappa = 2.0;
    let mb = mu_bar(d, kappa).unwrap();
    println!("mu_c = {}, mu_bar = {mb}", mu_c(d, kappa));

    let nl = Nonlinearity::new(mb + 1.0, d, kappa).unwrap();
    let (alpha, beta) = nl.alpha_beta().unwrap();
    let gamma = nl.gamma().unwrap();
    println!("alpha={alpha} beta={beta} gamma={gamma}");

    let tm = TimeMap::new(&nl);
    for frac in [0.25, 0.5, 0.8] {
        let xi = alpha + (gamma - alpha) * frac;
        let t0 = Instant::now();
        let rho = tm.rho(xi).unwrap();
        println!("rho({xi:.6}) = {rho:.12}   [{:?}]", t0.elapsed());
    }

    // deep regime
    for k in [40.0, 80.0, 160.0, 320.0] {
        let eta = alpha * (-k as f64).exp();
        let t0 = Instant::now();
        let b = tm.spike_boundary_from_eta(eta).unwrap();
        let len = tm.length(&mcrd_core::timemap::BranchBoundary::Spike(b)).unwrap();
        println!("k={k}: len={len:.9}  [{:?}]", t0.elapsed());
    }

    // solve_xi timing
    for ell in [5.0, 20.0, 100.0] {
        let t0 = Instant::now();
        let b = tm.solve_xi(ell).unwrap();
        println!("solve_xi({ell}): eta={:.6e} xi={:.12} [{:?}]", b.eta, b.xi, t0.elapsed());
    }

    // ramp
    let mu = 0.5 * (mu_c(d, kappa) + mb);
    let nl2 = Nonlinearity::new(mu, d, kappa).unwrap();
    let tm2 = TimeMap::new(&nl2);
    let ws = nl2.omega_star().unwrap();
    let (a2, _b2) = nl2.alpha_beta().unwrap();
    let omega = 0.6 * a2 + 0.4 * ws;
    let t0 = Instant::now();
    let ba = tm2.ramp_boundary_from_omega(omega, false).unwrap();
    println!("from_omega: y={:.6e} omega={omega} chi={} [{:?}]", ba.chi - 0.0, ba.omega, t0.elapsed());
    let bb = tm2.ramp_boundary_from_y(_beta_minus(&nl2, ba.chi), false).unwrap();
    println!("from_y: omega={} vs {}", bb.omega, ba.omega);
    let la = tm2.length(&mcrd_core::timemap::BranchBoundary::Ramp(ba)).unwrap();
    let lb = tm2.length(&mcrd_core::timemap::BranchBoundary::Ramp(bb)).unwrap();
    println!("lengths {la} vs {lb}  rel {}", (la - lb).abs() / la);
}

fn _beta_minus(nl: &Nonlinearity, chi: f64) -> f64 {
    let (_, beta) = nl.alpha_beta().unwrap();
    beta - chi
}
