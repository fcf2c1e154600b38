//! Probe states for the four transmitter families.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::symplectic::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransmitterKind {
    Vacuum,
    Coherent,
    /// Single-mode squeezed vacuum.
    Smsv,
    /// Two-mode squeezed vacuum: transmitted mode plus a retained memory mode.
    Tmss,
}

impl TransmitterKind {
    pub const ALL: [TransmitterKind; 4] = [
        TransmitterKind::Vacuum,
        TransmitterKind::Coherent,
        TransmitterKind::Smsv,
        TransmitterKind::Tmss,
    ];

    /// Modes in the probe, transmitted mode first.
    pub fn n_modes(self) -> usize {
        match self {
            TransmitterKind::Tmss => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TransmitterKind::Vacuum => "vacuum",
            TransmitterKind::Coherent => "coherent",
            TransmitterKind::Smsv => "smsv",
            TransmitterKind::Tmss => "tmss",
        }
    }
}

impl fmt::Display for TransmitterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransmitterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vacuum" => Ok(TransmitterKind::Vacuum),
            "coherent" => Ok(TransmitterKind::Coherent),
            "smsv" | "squeezed" => Ok(TransmitterKind::Smsv),
            "tmss" => Ok(TransmitterKind::Tmss),
            other => Err(Error::Plan(format!("unknown transmitter '{other}'"))),
        }
    }
}

/// A transmitter family together with its per-mode intensity `N_S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmitterSpec {
    pub kind: TransmitterKind,
    pub n_signal: f64,
}

impl TransmitterSpec {
    pub fn new(kind: TransmitterKind, n_signal: f64) -> Result<Self> {
        check_param("n_signal", n_signal, n_signal >= 0.0, "must be non-negative")?;
        if kind == TransmitterKind::Vacuum && n_signal != 0.0 {
            return Err(Error::InvalidParameter {
                name: "n_signal",
                value: n_signal,
                reason: "a vacuum transmitter carries no photons",
            });
        }
        Ok(TransmitterSpec { kind, n_signal })
    }

    pub fn vacuum() -> Self {
        TransmitterSpec {
            kind: TransmitterKind::Vacuum,
            n_signal: 0.0,
        }
    }

    pub fn coherent(n_signal: f64) -> Result<Self> {
        Self::new(TransmitterKind::Coherent, n_signal)
    }

    pub fn smsv(n_signal: f64) -> Result<Self> {
        Self::new(TransmitterKind::Smsv, n_signal)
    }

    pub fn tmss(n_signal: f64) -> Result<Self> {
        Self::new(TransmitterKind::Tmss, n_signal)
    }

    /// Squeezing parameter `r` with `N_S = sinh² r`.
    pub fn squeezing(&self) -> f64 {
        self.n_signal.sqrt().asinh()
    }
}

pub fn probe_state(spec: &TransmitterSpec) -> Result<GaussianState> {
    let spec = TransmitterSpec::new(spec.kind, spec.n_signal)?;
    let ns = spec.n_signal;
    let state = match spec.kind {
        TransmitterKind::Vacuum => GaussianState::vacuum(1),
        TransmitterKind::Coherent => GaussianState::from_parts(
            DVector::from_row_slice(&[(2.0 * ns).sqrt(), 0.0]),
            DMatrix::identity(2, 2) * 0.5,
        ),
        TransmitterKind::Smsv => {
            // e^{±2r} = (√(N_S+1) ± √N_S)²
            let up = ((ns + 1.0).sqrt() + ns.sqrt()).powi(2);
            let down = 1.0 / up;
            GaussianState::from_parts(
                DVector::zeros(2),
                DMatrix::from_diagonal(&DVector::from_row_slice(&[0.5 * down, 0.5 * up])),
            )
        }
        TransmitterKind::Tmss => {
            let a = ns + 0.5;
            let c = (ns * (ns + 1.0)).sqrt();
            GaussianState::from_parts(
                DVector::zeros(4),
                DMatrix::from_row_slice(
                    4,
                    4,
                    &[
                        a, 0.0, c, 0.0, //
                        0.0, a, 0.0, -c, //
                        c, 0.0, a, 0.0, //
                        0.0, -c, 0.0, a,
                    ],
                ),
            )
        }
    };
    Ok(state)
}

/// Thermal state with mean occupation `n_b`: covariance `(n_b + 1/2) I₂`.
pub fn thermal_state(n_b: f64) -> Result<GaussianState> {
    check_param("n_b", n_b, n_b >= 0.0, "must be non-negative")?;
    Ok(GaussianState::from_parts(
        DVector::zeros(2),
        DMatrix::identity(2, 2) * (n_b + 0.5),
    ))
}

/// Inverse temperature `ln((1+N)/N)` of a thermal mode.
pub fn inverse_temperature(n_b: f64) -> f64 {
    ((1.0 + n_b) / n_b).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coherent_mean() {
        let s = probe_state(&TransmitterSpec::coherent(4.0).unwrap()).unwrap();
        assert_relative_eq!(s.mean()[0], 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s.mean()[1], 0.0);
        assert_relative_eq!(s.mean_photon_number(0), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn unsqueezed_smsv_is_vacuum() {
        let s = probe_state(&TransmitterSpec::smsv(0.0).unwrap()).unwrap();
        assert_eq!(s, GaussianState::vacuum(1));
    }

    #[test]
    fn smsv_orientation_and_photons() {
        let ns = 2.5;
        let spec = TransmitterSpec::smsv(ns).unwrap();
        let s = probe_state(&spec).unwrap();
        let r = spec.squeezing();
        assert_relative_eq!(s.cov()[(0, 0)], 0.5 * (-2.0 * r).exp(), epsilon = 1e-13);
        assert_relative_eq!(s.cov()[(1, 1)], 0.5 * (2.0 * r).exp(), epsilon = 1e-13);
        assert_relative_eq!(s.cov()[(0, 0)] * s.cov()[(1, 1)], 0.25, epsilon = 1e-15);
        assert_relative_eq!(s.mean_photon_number(0), ns, epsilon = 1e-13);
    }

    #[test]
    fn tmss_photon_numbers() {
        for ns in [0.0, 0.01, 1.0, 37.0] {
            let s = probe_state(&TransmitterSpec::tmss(ns).unwrap()).unwrap();
            assert_relative_eq!(s.mean_photon_number(0), ns, epsilon = 1e-12);
            assert_relative_eq!(s.mean_photon_number(1), ns, epsilon = 1e-12);
        }
    }

    #[test]
    fn all_probes_are_pure() {
        for kind in TransmitterKind::ALL {
            for ns in [0.0, 0.3, 5.0] {
                let Ok(spec) = TransmitterSpec::new(kind, ns) else {
                    continue;
                };
                let w = probe_state(&spec).unwrap().williamson().unwrap();
                for nu in w.nu {
                    assert!((nu - 0.5).abs() < 1e-12, "{kind} {ns}: {nu}");
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(TransmitterSpec::coherent(-1.0).is_err());
        assert!(TransmitterSpec::new(TransmitterKind::Vacuum, 0.1).is_err());
        assert!(thermal_state(-0.1).is_err());
        assert_eq!("TMSS".parse::<TransmitterKind>().unwrap(), TransmitterKind::Tmss);
        assert!("laser".parse::<TransmitterKind>().is_err());
    }

    #[test]
    fn thermal_examples() {
        assert_eq!(thermal_state(0.0).unwrap(), GaussianState::vacuum(1));
        assert_relative_eq!(thermal_state(20.0).unwrap().cov()[(1, 1)], 20.5);
        let w = thermal_state(1.0).unwrap().williamson().unwrap();
        assert_relative_eq!(w.nu[0], 1.5, epsilon = 1e-14);
        assert_relative_eq!(2.0 * w.nu[0], 3.0, epsilon = 1e-14);
        assert_relative_eq!(inverse_temperature(1.0), 2f64.ln());
    }
}
