//! Target models and the resulting hypothesis pairs.
//!
//! The target is a beamsplitter of reflectivity `κ` that mixes the
//! transmitted mode (mode 0) with a thermal environment mode. Under the
//! agnostic model the environment occupation is `N_B` regardless of `κ`;
//! the legacy model replaces it with `N_B/(1−κ)`, which fixes the added
//! noise at `N_B + 1/2` per quadrature.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::symplectic::{apply_unitary, partial_trace, GaussianState, GaussianUnitary};
use crate::transmitters::{probe_state, thermal_state, TransmitterKind, TransmitterSpec};

/// Entrywise tolerance used to flag `ρ₀ = ρ₁`.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetModel {
    Agnostic,
    Legacy,
}

impl TargetModel {
    pub fn name(self) -> &'static str {
        match self {
            TargetModel::Agnostic => "agnostic",
            TargetModel::Legacy => "legacy",
        }
    }
}

impl fmt::Display for TargetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "agnostic" => Ok(TargetModel::Agnostic),
            "legacy" => Ok(TargetModel::Legacy),
            other => Err(Error::Plan(format!("unknown target model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetConfig {
    pub kappa: f64,
    pub n_b: f64,
    pub model: TargetModel,
}

impl TargetConfig {
    pub fn new(kappa: f64, n_b: f64, model: TargetModel) -> Result<Self> {
        check_param("kappa", kappa, (0.0..1.0).contains(&kappa), "must lie in [0, 1)")?;
        check_param("n_b", n_b, n_b >= 0.0, "must be non-negative")?;
        Ok(TargetConfig { kappa, n_b, model })
    }

    pub fn agnostic(kappa: f64, n_b: f64) -> Result<Self> {
        Self::new(kappa, n_b, TargetModel::Agnostic)
    }

    pub fn legacy(kappa: f64, n_b: f64) -> Result<Self> {
        Self::new(kappa, n_b, TargetModel::Legacy)
    }

    /// Occupation of the environment mode entering the beamsplitter.
    pub fn environment_occupation(&self) -> f64 {
        match self.model {
            TargetModel::Agnostic => self.n_b,
            TargetModel::Legacy => self.n_b / (1.0 - self.kappa),
        }
    }

    fn validate_present(&self) -> Result<()> {
        check_param(
            "kappa",
            self.kappa,
            self.kappa > 0.0 && self.kappa < 1.0,
            "target present requires 0 < kappa < 1",
        )?;
        check_param("n_b", self.n_b, self.n_b >= 0.0, "must be non-negative")
    }
}

/// Full state of transmitted, memory and environment modes after the
/// beamsplitter; the environment is the last mode.
pub fn dilated_state(probe: &GaussianState, cfg: &TargetConfig) -> Result<GaussianState> {
    cfg.validate_present()?;
    let env = thermal_state(cfg.environment_occupation())?;
    let joint = probe.tensor(&env);
    let n = joint.n_modes();
    let bs = GaussianUnitary::beamsplitter(cfg.kappa, 0, n - 1, n)?;
    apply_unitary(&joint, &bs)
}

/// State returned from the target ("target present").
pub fn target_present(probe: &GaussianState, cfg: &TargetConfig) -> Result<GaussianState> {
    let full = dilated_state(probe, cfg)?;
    let keep: Vec<usize> = (0..probe.n_modes()).collect();
    partial_trace(&full, &keep)
}

/// Single-mode thermal attenuator in closed form:
/// `m → √κ m`, `Σ → κ Σ + (1−κ)(N+1/2) I₂` with `N` the environment occupation.
pub fn attenuate_single_mode(probe: &GaussianState, cfg: &TargetConfig) -> Result<GaussianState> {
    cfg.validate_present()?;
    if probe.n_modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: probe.n_modes(),
        });
    }
    let k = cfg.kappa;
    let noise = (1.0 - k) * (cfg.environment_occupation() + 0.5);
    let mean = probe.mean() * k.sqrt();
    let cov = probe.cov() * k + DMatrix::identity(2, 2) * noise;
    Ok(GaussianState::from_parts(mean, cov))
}

/// "Target absent": the transmitted mode is replaced by the background,
/// memory modes keep their reduced state.
pub fn target_absent(probe: &GaussianState, cfg: &TargetConfig) -> Result<GaussianState> {
    check_param("n_b", cfg.n_b, cfg.n_b >= 0.0, "must be non-negative")?;
    let background = thermal_state(cfg.n_b)?;
    if probe.n_modes() == 1 {
        return Ok(background);
    }
    let memory: Vec<usize> = (1..probe.n_modes()).collect();
    Ok(background.tensor(&partial_trace(probe, &memory)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPair {
    /// Target absent.
    pub rho0: GaussianState,
    /// Target present.
    pub rho1: GaussianState,
    pub config: TargetConfig,
    pub transmitter: TransmitterSpec,
    /// `ρ₀ = ρ₁` to within [`DEGENERACY_TOL`]: no test can tell them apart.
    pub degenerate: bool,
}

pub fn make_pair(spec: &TransmitterSpec, cfg: &TargetConfig) -> Result<HypothesisPair> {
    let probe = probe_state(spec)?;
    let rho1 = target_present(&probe, cfg)?;
    let rho0 = target_absent(&probe, cfg)?;
    let scale = rho0.cov().amax().max(1.0);
    let degenerate = rho0.max_abs_diff(&rho1) <= DEGENERACY_TOL * scale;
    Ok(HypothesisPair {
        rho0,
        rho1,
        config: *cfg,
        transmitter: *spec,
        degenerate,
    })
}

/// Closed form of the 6×6 (transmitted, memory, environment) covariance for a
/// TMSS probe in the half-unit convention, with `N` the environment occupation.
pub fn tmss_dilated_covariance(n_s: f64, n_env: f64, kappa: f64) -> DMatrix<f64> {
    let k = kappa;
    let t_var = k * (n_s + 0.5) + (1.0 - k) * (n_env + 0.5);
    let e_var = k * (n_env + 0.5) + (1.0 - k) * (n_s + 0.5);
    let q_var = n_s + 0.5;
    let c = (n_s * (n_s + 1.0)).sqrt();
    let tq = k.sqrt() * c;
    let qe = (1.0 - k).sqrt() * c;
    let te = (k * (1.0 - k)).sqrt() * (n_s - n_env);
    let mut m = DMatrix::zeros(6, 6);
    let mut set = |r: usize, col: usize, v: f64| {
        m[(r, col)] = v;
        m[(col, r)] = v;
    };
    set(0, 0, t_var);
    set(1, 1, t_var);
    set(2, 2, q_var);
    set(3, 3, q_var);
    set(4, 4, e_var);
    set(5, 5, e_var);
    set(0, 2, tq);
    set(1, 3, -tq);
    set(0, 4, te);
    set(1, 5, te);
    set(2, 4, qe);
    set(3, 5, -qe);
    m
}

/// One entry where two matrices disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub left: f64,
    pub right: f64,
}

/// Entries of `a` and `b` differing by more than `tol`, or not comparable (NaN).
pub fn covariance_mismatches(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for row in 0..a.nrows().min(b.nrows()) {
        for col in 0..a.ncols().min(b.ncols()) {
            let (l, r) = (a[(row, col)], b[(row, col)]);
            if !((l - r).abs() <= tol) {
                out.push(Mismatch {
                    row,
                    col,
                    left: l,
                    right: r,
                });
            }
        }
    }
    out
}

impl HypothesisPair {
    pub fn kind(&self) -> TransmitterKind {
        self.transmitter.kind
    }
}
