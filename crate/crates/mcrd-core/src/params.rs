//! Model parameters in physical `(N, S, I)` form and reduced `(u, v, w)`
//! form, with the exact change of variables between them:
//! `u = (k_N/k_I) N`, `kappa = k_N/k_I`, `tau = k_I`, `d = D_N`,
//! `eps = D_I`, `M = kappa * A`, `ell = L`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Raw constants of the three-component system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// inhibitor production rate (1/time)
    pub k_n: f64,
    /// inhibitor decay rate (1/time)
    pub k_i: f64,
    /// F-actin diffusivity
    pub d_n: f64,
    /// inhibitor diffusivity
    pub d_i: f64,
    /// mean mass density of N + S
    pub a: f64,
    /// domain length
    pub l: f64,
}

/// Constants of the reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    /// kappa = k_N / k_I (> 1)
    pub kappa: f64,
    /// tau = k_I
    pub tau: f64,
    /// d = D_N
    pub d: f64,
    /// eps = D_I
    pub eps: f64,
    /// mean mass M = kappa * A
    pub m: f64,
    /// domain length
    pub ell: f64,
}

impl PhysicalParams {
    pub fn new(k_n: f64, k_i: f64, d_n: f64, d_i: f64, a: f64, l: f64) -> Result<Self> {
        let p = Self { k_n, k_i, d_n, d_i, a, l };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v, allow_zero) in [
            ("k_N", self.k_n, false),
            ("k_I", self.k_i, false),
            ("D_N", self.d_n, false),
            ("D_I", self.d_i, true),
            ("A", self.a, false),
            ("L", self.l, false),
        ] {
            if !v.is_finite() || v < 0.0 || (!allow_zero && v == 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be {} and finite, got {v}",
                    if allow_zero { ">= 0" } else { "> 0" }
                )));
            }
        }
        if self.k_i >= self.k_n {
            return Err(Error::InvalidParameter(format!(
                "k_I < k_N required, got k_I={} >= k_N={}",
                self.k_i, self.k_n
            )));
        }
        Ok(())
    }

    /// Soft-constraint diagnostics: the model assumes `0 <= D_I << D_N < 1`.
    /// Violations are reported, not rejected.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.d_i > self.d_n {
            w.push(format!(
                "D_I={} exceeds D_N={}; the model assumes 0 <= D_I << D_N",
                self.d_i, self.d_n
            ));
        }
        if self.d_n >= 1.0 {
            w.push(format!("D_N={} >= 1; the model assumes D_N < 1", self.d_n));
        }
        w
    }

    pub fn from_kv(map: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| Error::Config(format!("missing physical key '{k}'")))
        };
        Self::new(
            get("k_N")?,
            get("k_I")?,
            get("D_N")?,
            get("D_I")?,
            get("A")?,
            get("L")?,
        )
    }
}

/// Change of variables from physical to reduced constants.
pub fn to_reduced(p: &PhysicalParams) -> Result<ReducedParams> {
    p.validate()?;
    let kappa = p.k_n / p.k_i;
    Ok(ReducedParams {
        kappa,
        tau: p.k_i,
        d: p.d_n,
        eps: p.d_i,
        m: kappa * p.a,
        ell: p.l,
    })
}

impl ReducedParams {
    pub fn new(kappa: f64, tau: f64, d: f64, eps: f64, m: f64, ell: f64) -> Result<Self> {
        let p = Self { kappa, tau, d, eps, m, ell };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v, allow_zero) in [
            ("kappa", self.kappa, false),
            ("tau", self.tau, false),
            ("d", self.d, false),
            ("eps", self.eps, true),
            ("M", self.m, false),
            ("ell", self.ell, false),
        ] {
            if !v.is_finite() || v < 0.0 || (!allow_zero && v == 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be {} and finite, got {v}",
                    if allow_zero { ">= 0" } else { "> 0" }
                )));
            }
        }
        if self.kappa <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa = k_N/k_I must exceed 1, got {}",
                self.kappa
            )));
        }
        Ok(())
    }

    /// Inverse of [`to_reduced`].
    pub fn to_physical(&self) -> Result<PhysicalParams> {
        self.validate()?;
        PhysicalParams::new(
            self.kappa * self.tau,
            self.tau,
            self.d,
            self.eps,
            self.m / self.kappa,
            self.ell,
        )
    }

    /// Stationary theory of the reduced scalar equation requires `0 < d < 1`.
    pub fn require_d_in_unit(&self) -> Result<()> {
        if self.d <= 0.0 || self.d >= 1.0 {
            return Err(Error::Domain(format!(
                "0 < d < 1 required for stationary-solution operations, got d={}",
                self.d
            )));
        }
        Ok(())
    }

    pub fn from_kv(map: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| Error::Config(format!("missing reduced key '{k}'")))
        };
        Self::new(
            get("kappa")?,
            get("tau")?,
            get("d")?,
            get("eps")?,
            get("M")?,
            get("ell")?,
        )
    }
}

/// Recognized flat-config keys, physical then reduced.
pub const PHYSICAL_KEYS: [&str; 6] = ["k_N", "k_I", "D_N", "D_I", "A", "L"];
pub const REDUCED_KEYS: [&str; 6] = ["kappa", "tau", "d", "eps", "M", "ell"];

/// Parse a flat `key=value` text config. `#` starts a comment; blank lines
/// are ignored; keys must be from [`PHYSICAL_KEYS`] or [`REDUCED_KEYS`].
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key=value, got '{line}'", lineno + 1))
        })?;
        let key = key.trim();
        if !PHYSICAL_KEYS.contains(&key) && !REDUCED_KEYS.contains(&key) {
            return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
        }
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::Config(format!("line {}: cannot parse value for '{key}'", lineno + 1))
        })?;
        map.insert(key.to_string(), value);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_caption_values() {
        let p = PhysicalParams::new(2.0, 0.8, 0.01, 0.001, 8.8, 100.0).unwrap();
        let r = to_reduced(&p).unwrap();
        assert_eq!(r.kappa, 2.5);
        assert_eq!(r.tau, 0.8);
        assert_eq!(r.d, 0.01);
        assert_eq!(r.eps, 0.001);
        assert!((r.m - 22.0).abs() < 1e-13);
        assert_eq!(r.ell, 100.0);
    }

    #[test]
    fn fig8_caption_values() {
        let p = PhysicalParams::new(2.0, 0.3, 0.1, 0.0, 7.8, 100.0).unwrap();
        let r = to_reduced(&p).unwrap();
        assert!((r.kappa - 20.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.tau, 0.3);
        assert_eq!(r.d, 0.1);
        assert_eq!(r.eps, 0.0);
        assert!((r.m - 52.0).abs() < 1e-12);
    }

    #[test]
    fn zero_mass_limit() {
        // linear map at zero mass: M -> 0 as A -> 0
        for a in [1e-6, 1e-9, 1e-12] {
            let p = PhysicalParams::new(2.0, 1.0, 0.5, 0.5, a, 1.0).unwrap();
            let r = to_reduced(&p).unwrap();
            assert!(r.m <= 2.0 * a && r.m > 0.0);
        }
    }

    #[test]
    fn rejects_rate_ordering() {
        assert!(PhysicalParams::new(1.0, 1.0, 0.1, 0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(0.5, 0.8, 0.1, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rejects_nonpositive_fields() {
        assert!(PhysicalParams::new(2.0, 0.8, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(2.0, 0.8, 0.1, -0.1, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(2.0, 0.8, 0.1, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn soft_ordering_warns_not_errors() {
        let p = PhysicalParams::new(2.0, 0.8, 1.5, 0.2, 1.0, 1.0).unwrap();
        let w = p.warnings();
        assert_eq!(w.len(), 1); // D_N >= 1
        let p = PhysicalParams::new(2.0, 0.8, 0.1, 0.2, 1.0, 1.0).unwrap();
        assert_eq!(p.warnings().len(), 1); // D_I > D_N
        let p = PhysicalParams::new(2.0, 0.8, 0.1, 0.001, 1.0, 1.0).unwrap();
        assert!(p.warnings().is_empty());
    }

    #[test]
    fn round_trip_within_ulps() {
        let cases = [
            (2.0, 0.8, 0.01, 0.001, 8.8, 100.0),
            (2.0, 0.3, 0.1, 0.0, 9.5, 100.0),
            (3.7, 1.3, 0.25, 0.125, 12.125, 40.0),
        ];
        for (k_n, k_i, d_n, d_i, a, l) in cases {
            let p = PhysicalParams::new(k_n, k_i, d_n, d_i, a, l).unwrap();
            let q = to_reduced(&p).unwrap().to_physical().unwrap();
            for (x, y) in [
                (p.k_n, q.k_n),
                (p.k_i, q.k_i),
                (p.d_n, q.d_n),
                (p.d_i, q.d_i),
                (p.a, q.a),
                (p.l, q.l),
            ] {
                assert!((x - y).abs() <= 2.0 * f64::EPSILON * x.abs().max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn mass_ratio_is_kappa() {
        let p = PhysicalParams::new(2.0, 0.8, 0.01, 0.001, 8.8, 100.0).unwrap();
        let r = to_reduced(&p).unwrap();
        assert!((r.m / p.a - r.kappa).abs() <= f64::EPSILON * r.kappa);
    }

    #[test]
    fn kv_parsing() {
        let text = "\n# comment\nk_N = 2.0\nk_I=0.8\nD_N=0.01 # inline\nD_I=0.001\nA=8.8\nL=100\n";
        let map = parse_kv(text).unwrap();
        let p = PhysicalParams::from_kv(&map).unwrap();
        assert_eq!(p.k_n, 2.0);
        assert_eq!(p.l, 100.0);

        assert!(parse_kv("bogus=1").is_err());
        assert!(parse_kv("k_N").is_err());
        assert!(parse_kv("k_N=abc").is_err());
    }
}
