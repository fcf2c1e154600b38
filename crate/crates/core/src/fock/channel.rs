//! Beamsplitter target channel in the number basis.

use nalgebra::DMatrix;

use super::{thermal_fock, Complex64, FockOperator, TRUNCATION_BUDGET};
use crate::error::{Error, Result};
use crate::target::{TargetConfig, TargetModel};

/// Generator `−θ(a b† − a† b)` restricted to `t + e = n_total`, on the
/// basis `|t, n_total − t⟩` with `t` in `t_range`.
fn block_generator(n_total: usize, theta: f64, t_lo: usize, t_hi: usize) -> DMatrix<f64> {
    let dim = t_hi + 1 - t_lo;
    let mut g = DMatrix::zeros(dim, dim);
    for t in t_lo..=t_hi {
        let e = (n_total - t) as f64;
        let tf = t as f64;
        let j = t - t_lo;
        if t > t_lo {
            g[(j - 1, j)] = -theta * tf.sqrt() * (e + 1.0).sqrt();
        }
        if t < t_hi {
            g[(j + 1, j)] = theta * (tf + 1.0).sqrt() * e.sqrt();
        }
    }
    g
}

/// Beamsplitter on the `n_total`-photon subspace with the transmitted mode
/// capped at `d_t − 1` and the environment at `d_e − 1` photons.
///
/// Row and column `j` stand for `t = t_lo + j` with
/// `t_lo = max(0, n_total − d_e + 1)`. With `d_t, d_e > n_total` this is the
/// exact block.
pub fn beamsplitter_block(n_total: usize, theta: f64, d_t: usize, d_e: usize) -> DMatrix<f64> {
    let t_lo = (n_total + 1).saturating_sub(d_e);
    let t_hi = n_total.min(d_t - 1);
    if t_lo > t_hi {
        return DMatrix::zeros(0, 0);
    }
    block_generator(n_total, theta, t_lo, t_hi).exp()
}

/// Matrix exponential of the truncated generator on the full `d_t · d_e`
/// space, indexed `t · d_e + e`.
pub fn beamsplitter_unitary(theta: f64, d_t: usize, d_e: usize) -> DMatrix<f64> {
    let mut u = DMatrix::zeros(d_t * d_e, d_t * d_e);
    for n in 0..(d_t + d_e - 1) {
        let t_lo = (n + 1).saturating_sub(d_e);
        let b = beamsplitter_block(n, theta, d_t, d_e);
        for (i, ti) in (t_lo..t_lo + b.nrows()).enumerate() {
            for (j, tj) in (t_lo..t_lo + b.ncols()).enumerate() {
                u[(ti * d_e + n - ti, tj * d_e + n - tj)] = b[(i, j)];
            }
        }
    }
    u
}

/// Mixes mode 0 of `state` with a thermal environment of `cfg.n_b` photons
/// truncated to `env_cutoff` levels, then traces the environment out.
///
/// Each photon-number block of the beamsplitter is exponentiated without
/// truncation, so the only losses are the environment tail and output
/// weight pushed above the state's cutoff. Both show up in the trace deficit.
pub fn apply_target_fock(
    state: &FockOperator,
    cfg: &TargetConfig,
    env_cutoff: usize,
) -> Result<FockOperator> {
    if cfg.model != TargetModel::Agnostic {
        return Err(Error::Unsupported(
            "the Fock channel takes the agnostic model; substitute the environment occupation first"
                .into(),
        ));
    }
    let cfg = TargetConfig::new(cfg.kappa, cfg.n_b, cfg.model)?;
    let env = thermal_fock(cfg.n_b, env_cutoff)?;
    let p: Vec<f64> = (0..env_cutoff).map(|e| env.matrix()[(e, e)].re).collect();
    let theta = cfg.kappa.sqrt().acos();

    let d = state.cutoff();
    let rest = state.dim() / d;
    let max_n = d + env_cutoff - 2;
    let blocks: Vec<DMatrix<f64>> = (0..=max_n)
        .map(|n| beamsplitter_block(n, theta, n + 1, n + 1))
        .collect();
    // amplitude ⟨t + δ, e − δ| U |t, e⟩
    let amp = |t: usize, e: usize, delta: isize| -> f64 {
        let n = t + e;
        let out = t as isize + delta;
        if out < 0 || out as usize > n {
            return 0.0;
        }
        blocks[n][(out as usize, t)]
    };

    let rho = state.matrix();
    let mut out = DMatrix::<Complex64>::zeros(state.dim(), state.dim());
    for delta in -(d as isize - 1)..(env_cutoff as isize) {
        for t1 in 0..d {
            let o1 = t1 as isize + delta;
            if o1 < 0 || o1 >= d as isize {
                continue;
            }
            for t2 in 0..d {
                let o2 = t2 as isize + delta;
                if o2 < 0 || o2 >= d as isize {
                    continue;
                }
                // the environment loses δ photons, so it must start with at least δ
                let e0 = delta.max(0) as usize;
                let w: f64 = (e0..env_cutoff)
                    .map(|e| p[e] * amp(t1, e, delta) * amp(t2, e, delta))
                    .sum();
                if w == 0.0 {
                    continue;
                }
                let src = rho.view((t1 * rest, t2 * rest), (rest, rest));
                let mut dst = out.view_mut((o1 as usize * rest, o2 as usize * rest), (rest, rest));
                dst.zip_apply(&src, |a, b| *a += b * w);
            }
        }
    }

    let result = FockOperator::new(state.n_modes(), d, out)?;
    let lost = result.trace_deficit() - state.trace_deficit();
    if lost > TRUNCATION_BUDGET {
        return Err(Error::TruncationBudget {
            deficit: lost,
            budget: TRUNCATION_BUDGET,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_state, mean_photon_number, quadrature_moments};
    use crate::transmitters::TransmitterSpec;
    use approx::assert_relative_eq;

    #[test]
    fn exact_block_is_orthogonal() {
        for n in [0, 1, 5, 30] {
            let b = beamsplitter_block(n, 0.7, n + 1, n + 1);
            let defect = (b.transpose() * &b - DMatrix::identity(n + 1, n + 1)).amax();
            assert!(defect < 1e-12, "n = {n}: {defect:e}");
        }
    }

    #[test]
    fn single_photon_transmission() {
        // |1, 0⟩ → √κ |1, 0⟩ + ... with θ = acos √κ
        let kappa: f64 = 0.3;
        let b = beamsplitter_block(1, kappa.sqrt().acos(), 2, 2);
        assert_relative_eq!(b[(1, 1)].abs(), kappa.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(b[(0, 1)].abs(), (1.0 - kappa).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn truncated_unitary_low_block() {
        let u = beamsplitter_unitary(1.1, 12, 12);
        let defect = (u.transpose() * &u - DMatrix::identity(144, 144)).amax();
        assert!(defect < 1e-9);
        // agrees with the exact blocks wherever t + e < 12
        let b = beamsplitter_block(6, 1.1, 7, 7);
        assert_relative_eq!(u[(2 * 12 + 4, 5 * 12 + 1)], b[(2, 5)], epsilon = 1e-12);
    }

    #[test]
    fn vacuum_stays_vacuum_in_cold_environment() {
        let v = build_state(&TransmitterSpec::vacuum(), 4).unwrap();
        let out = apply_target_fock(&v, &TargetConfig::agnostic(0.4, 0.0).unwrap(), 4).unwrap();
        assert!((out.matrix() - v.matrix()).camax() < 1e-14);
    }

    #[test]
    fn photon_bookkeeping() {
        let c = build_state(&TransmitterSpec::coherent(0.3).unwrap(), 20).unwrap();
        let out = apply_target_fock(&c, &TargetConfig::agnostic(0.2, 0.4).unwrap(), 20).unwrap();
        assert_relative_eq!(mean_photon_number(&out, 0).unwrap(), 0.38, epsilon = 1e-6);
    }

    #[test]
    fn squeezed_variances_after_channel() {
        let (ns, k, nb) = (0.3, 0.2, 0.4);
        let s = build_state(&TransmitterSpec::smsv(ns).unwrap(), 40).unwrap();
        let out = apply_target_fock(&s, &TargetConfig::agnostic(k, nb).unwrap(), 30).unwrap();
        let m = quadrature_moments(&out, 0).unwrap();
        let e2r = ((ns + 1.0f64).sqrt() + ns.sqrt()).powi(2);
        let env = (1.0 - k) * (2.0 * nb + 1.0);
        assert_relative_eq!(2.0 * m.cov[(0, 0)], k / e2r + env, epsilon = 1e-6);
        assert_relative_eq!(2.0 * m.cov[(1, 1)], k * e2r + env, epsilon = 1e-6);
    }

    #[test]
    fn tmss_memory_is_untouched() {
        let t = build_state(&TransmitterSpec::tmss(0.2).unwrap(), 14).unwrap();
        let out = apply_target_fock(&t, &TargetConfig::agnostic(0.3, 0.25).unwrap(), 14).unwrap();
        assert_relative_eq!(mean_photon_number(&out, 1).unwrap(), 0.2, epsilon = 1e-8);
        assert_relative_eq!(
            mean_photon_number(&out, 0).unwrap(),
            0.3 * 0.2 + 0.7 * 0.25,
            epsilon = 1e-8
        );
    }

    #[test]
    fn legacy_model_is_rejected() {
        let v = build_state(&TransmitterSpec::vacuum(), 4).unwrap();
        let r = apply_target_fock(&v, &TargetConfig::legacy(0.4, 0.1).unwrap(), 4);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let c = build_state(&TransmitterSpec::coherent(0.3).unwrap(), 20).unwrap();
        let r = apply_target_fock(&c, &TargetConfig::agnostic(0.2, 2.0).unwrap(), 6);
        assert!(matches!(r, Err(Error::TruncationBudget { .. })));
    }
}
