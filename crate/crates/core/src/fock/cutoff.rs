//! Hypothesis pairs in the number basis and automatic cutoff selection.

use std::collections::HashMap;

use super::{
    apply_target_fock, build_state, q_s_fock, thermal_fock, FockOperator, MULTI_MODE_CEILING,
    SINGLE_MODE_CEILING,
};
use crate::error::{check_param, Error, Result};
use crate::target::{TargetConfig, TargetModel};
use crate::transmitters::{TransmitterKind, TransmitterSpec};

/// `(ρ₀, ρ₁)`: target absent and present, every mode truncated to `cutoff`.
///
/// The legacy model is handled by raising the environment occupation to
/// `N_B/(1−κ)` before the agnostic channel is applied.
pub fn fock_pair(
    spec: &TransmitterSpec,
    cfg: &TargetConfig,
    cutoff: usize,
) -> Result<(FockOperator, FockOperator)> {
    let cfg = TargetConfig::new(cfg.kappa, cfg.n_b, cfg.model)?;
    check_param("kappa", cfg.kappa, cfg.kappa > 0.0, "target present requires kappa > 0")?;
    let probe = build_state(spec, cutoff)?;
    let background = thermal_fock(cfg.n_b, cutoff)?;
    let rho0 = if probe.n_modes() > 1 {
        background.tensor(&probe.trace_out_first()?)?
    } else {
        background
    };
    let channel = TargetConfig::new(cfg.kappa, cfg.environment_occupation(), TargetModel::Agnostic)?;
    let rho1 = apply_target_fock(&probe, &channel, cutoff)?;
    Ok((rho0, rho1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffOptions {
    pub tol: f64,
    /// Per-mode ceiling without a memory mode.
    pub single_mode_ceiling: usize,
    /// Per-mode ceiling when the probe carries a memory mode.
    pub multi_mode_ceiling: usize,
}

impl Default for CutoffOptions {
    fn default() -> Self {
        CutoffOptions {
            tol: 1e-10,
            single_mode_ceiling: SINGLE_MODE_CEILING,
            multi_mode_ceiling: MULTI_MODE_CEILING,
        }
    }
}

pub fn choose_cutoff(spec: &TransmitterSpec, cfg: &TargetConfig, tol: f64) -> Result<usize> {
    choose_cutoff_with(
        spec,
        cfg,
        &CutoffOptions {
            tol,
            ..CutoffOptions::default()
        },
    )
}

/// Smallest `D` with geometric tails below `tol`, then raised one level at a
/// time until doubling it (up to the ceiling) moves `Q_{1/2}` by less than
/// `tol` and every trace deficit is below `tol`.
///
/// The starting point treats every occupation as geometric with ratio
/// `N/(N+1)`; squeezed vacuum only fills even levels, so its ratio per level
/// is the square root of that.
pub fn choose_cutoff_with(
    spec: &TransmitterSpec,
    cfg: &TargetConfig,
    opts: &CutoffOptions,
) -> Result<usize> {
    let tol = opts.tol;
    check_param("tol", tol, tol > 0.0 && tol < 1.0, "must lie in (0, 1)")?;
    let spec = TransmitterSpec::new(spec.kind, spec.n_signal)?;
    let cfg = TargetConfig::new(cfg.kappa, cfg.n_b, cfg.model)?;
    let ceiling = if spec.kind.n_modes() > 1 {
        opts.multi_mode_ceiling
    } else {
        opts.single_mode_ceiling
    };

    let ratio = |n: f64| n / (n + 1.0);
    let mut ratios = vec![ratio(cfg.n_b), ratio(cfg.environment_occupation())];
    ratios.push(match spec.kind {
        TransmitterKind::Smsv => ratio(spec.n_signal).sqrt(),
        _ => ratio(spec.n_signal),
    });
    let start = ratios
        .iter()
        .map(|&r| {
            if r == 0.0 {
                1.0
            } else {
                (tol.ln() / r.ln()).floor() + 1.0
            }
        })
        .fold(2.0, f64::max);
    if start > ceiling as f64 {
        return Err(Error::CutoffCeiling {
            required: start.min(usize::MAX as f64) as usize,
            ceiling,
        });
    }

    // (Q_{1/2}, largest trace deficit) per cutoff; None when the budget fails
    let mut seen: HashMap<usize, Option<(f64, f64)>> = HashMap::new();
    let mut eval = |d: usize| -> Result<Option<(f64, f64)>> {
        if let Some(v) = seen.get(&d) {
            return Ok(*v);
        }
        let v = match fock_pair(&spec, &cfg, d) {
            Ok((r0, r1)) => Some((
                q_s_fock(&r0, &r1, 0.5)?,
                r0.trace_deficit().max(r1.trace_deficit()),
            )),
            Err(Error::TruncationBudget { .. }) => None,
            Err(e) => return Err(e),
        };
        seen.insert(d, v);
        Ok(v)
    };

    let mut d = start as usize;
    loop {
        let d2 = (2 * d).min(ceiling);
        if d2 == d {
            return Err(Error::CutoffCeiling {
                required: d + 1,
                ceiling,
            });
        }
        if let (Some((qa, deficit)), Some((qb, _))) = (eval(d)?, eval(d2)?) {
            if deficit < tol && (qa - qb).abs() < tol {
                return Ok(d);
            }
        }
        d += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cold_vacuum_needs_two_levels() {
        let cfg = TargetConfig::agnostic(0.3, 0.0).unwrap();
        assert_eq!(choose_cutoff(&TransmitterSpec::vacuum(), &cfg, 1e-10).unwrap(), 2);
    }

    #[test]
    fn thermal_background_tail() {
        // (1/3)^D < 1e-10 first holds at D = 21; Q_{1/2} there still moves by 2e-10
        let cfg = TargetConfig::agnostic(0.2, 0.5).unwrap();
        assert_eq!(choose_cutoff(&TransmitterSpec::vacuum(), &cfg, 1e-10).unwrap(), 22);
    }

    #[test]
    fn hot_background_hits_ceiling() {
        let cfg = TargetConfig::agnostic(0.2, 20.0).unwrap();
        let r = choose_cutoff(&TransmitterSpec::tmss(0.1).unwrap(), &cfg, 1e-10);
        assert!(matches!(r, Err(Error::CutoffCeiling { ceiling: 24, .. })));
    }

    #[test]
    fn pair_traces() {
        let cfg = TargetConfig::legacy(0.2, 0.3).unwrap();
        let (r0, r1) = fock_pair(&TransmitterSpec::tmss(0.2).unwrap(), &cfg, 16).unwrap();
        assert_eq!(r0.n_modes(), 2);
        assert!(r0.trace_deficit() < 1e-8 && r1.trace_deficit() < 1e-8);
    }
}
