//! Overlap of the four transmitter families, evaluated from their explicit
//! normal forms instead of a numerical Williamson decomposition.
//!
//! The absent hypothesis is always a product of thermal modes, so only the
//! present state needs diagonalizing: a single-mode squeezed thermal state
//! (`diag(a, b)` in doubled units) or a two-mode squeezed thermal state
//! (`[[a I, c Z], [c Z, b I]]`). Every intermediate is written so that the
//! distance of each symplectic eigenvalue from a pure state is formed without
//! cancellation, which lets the same code run in double-double arithmetic.

use num_traits::Float;
use twofloat::TwoFloat;

use super::functions::Kernel;
use crate::error::{check_param, Error, Result};
use crate::target::{TargetConfig, TargetModel};
use crate::transmitters::{TransmitterKind, TransmitterSpec};

/// `Q_s = prefactor · exp(−exponent)`; `deficit` is `1 − prefactor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapTerms<T> {
    pub prefactor: T,
    pub deficit: T,
    pub exponent: T,
}

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("f64 converts to every supported float type")
}

/// Doubled-convention moments of the present state, with `w = x − 1` for
/// every symplectic eigenvalue `x`.
pub fn overlap_terms<T: Kernel>(
    spec: &TransmitterSpec,
    cfg: &TargetConfig,
    s: T,
) -> Result<OverlapTerms<T>> {
    let spec = TransmitterSpec::new(spec.kind, spec.n_signal)?;
    let cfg = TargetConfig::new(cfg.kappa, cfg.n_b, cfg.model)?;
    check_param("kappa", cfg.kappa, cfg.kappa > 0.0, "target present requires kappa > 0")?;
    let sf = s.to_f64().unwrap_or(f64::NAN);
    check_param("s", sf, sf > 0.0 && sf < 1.0, "must lie in (0, 1)")?;

    let div = T::quotient;
    let one = T::one();
    let two = c::<T>(2.0);
    let k = c::<T>(cfg.kappa);
    let nb = c::<T>(cfg.n_b);
    let ns = c::<T>(spec.n_signal);
    let sc = one - s;

    // environment contribution env = (1−κ)(2N_env + 1) = env_excess + 1 − κ
    let env_excess = match cfg.model {
        TargetModel::Agnostic => two * nb * (one - k),
        TargetModel::Legacy => two * nb,
    };
    let env = env_excess + one - k;

    // ρ₀ transmitted mode: x = 2N_B + 1
    let (g0, l0) = T::g_lambda(s, two * nb);

    match spec.kind {
        TransmitterKind::Vacuum | TransmitterKind::Coherent => {
            // a = b = κ + env, so a − 1 = env_excess
            let (g1, l1) = T::g_lambda(sc, env_excess);
            let p = l0 + l1;
            let num = two * g0 * g1;
            let delta_sq = c::<T>(4.0) * k * ns;
            Ok(OverlapTerms {
                prefactor: div(num, p),
                deficit: div(p - num, p),
                exponent: div(delta_sq, two * p),
            })
        }
        TransmitterKind::Smsv => {
            let e2r = ((ns + one).sqrt() + ns.sqrt()).powi(2);
            let a = div(k, e2r) + env;
            let b = k * e2r + env;
            // ab − 1 = κ² + κ env (e^{2r} + e^{−2r}) + (env − 1)(env + 1)
            let ab_m1 = k * k + k * env * (e2r + div(one, e2r)) + (env_excess - k) * (env + one);
            let x1 = (a * b).sqrt();
            let w1 = div(ab_m1, x1 + one);
            let ratio = div(a, b).sqrt();
            let (g1, l1) = T::g_lambda(sc, w1);
            let pq = l0 + l1 * ratio;
            let pp = l0 + div(l1, ratio);
            let root = (pq * pp).sqrt();
            let num = two * g0 * g1;
            Ok(OverlapTerms {
                prefactor: div(num, root),
                deficit: div(root - num, root),
                exponent: T::zero(),
            })
        }
        TransmitterKind::Tmss => {
            let b = two * ns + one;
            let a = k * b + env;
            let cc = two * (k * ns * (ns + one)).sqrt();
            let rt = ((a + b) * (a + b) - c::<T>(4.0) * cc * cc).sqrt();
            let w_t = (rt + a - b) * c::<T>(0.5) - one;
            // ν_Q − 1 = 4 N_S (env + 1 − κ) / (rt + a − b + 2)
            let w_q = div(c::<T>(4.0) * ns * (env + one - k), rt + a - b + two);
            let sh2 = div(two * cc * cc, rt * (a + b + rt));
            let ch2 = one + sh2;
            let chsh = div(cc, rt);
            let (g0q, l0q) = T::g_lambda(s, two * ns);
            let (g1t, l1t) = T::g_lambda(sc, w_t);
            let (g1q, l1q) = T::g_lambda(sc, w_q);
            let p = l0 + l1t * ch2 + l1q * sh2;
            let t = l0q + l1t * sh2 + l1q * ch2;
            let r = (l1t + l1q) * chsh;
            let root = p * t - r * r;
            let num = c::<T>(4.0) * g0 * g0q * g1t * g1q;
            Ok(OverlapTerms {
                prefactor: div(num, root),
                deficit: div(root - num, root),
                exponent: T::zero(),
            })
        }
    }
}

/// `ln Q_s` from the normal forms, in double precision.
pub fn ln_q_s_standard(spec: &TransmitterSpec, cfg: &TargetConfig, s: f64) -> Result<f64> {
    let t = overlap_terms::<f64>(spec, cfg, s)?;
    if !(t.prefactor > 0.0) {
        return Err(Error::Numerical(format!("overlap prefactor {}", t.prefactor)));
    }
    super::overlap::clamp_ln_q(t.prefactor.ln() - t.exponent)
}

pub fn q_s_standard(spec: &TransmitterSpec, cfg: &TargetConfig, s: f64) -> Result<f64> {
    Ok(ln_q_s_standard(spec, cfg, s)?.exp())
}

/// `1 − Q_{1/2}` with the leading cancellation done in double-double.
///
/// Stays accurate when the deficit is far below `f64::EPSILON`, e.g.
/// `κ = 1e-10`, `N_S = 1e-4`, `N_B = 1e4`.
pub fn bhattacharyya_deficit(spec: &TransmitterSpec, cfg: &TargetConfig) -> Result<f64> {
    let t = overlap_terms::<TwoFloat>(spec, cfg, TwoFloat::from(0.5))?;
    let prefactor = t.prefactor.hi() + t.prefactor.lo();
    let exponent = t.exponent.hi() + t.exponent.lo();
    let deficit = (t.deficit.hi() + t.deficit.lo()) - prefactor * (-exponent).exp_m1();
    if !deficit.is_finite() || deficit < -1e-300 {
        return Err(Error::Numerical(format!("Bhattacharyya deficit {deficit:e}")));
    }
    Ok(deficit.max(0.0))
}

/// `−ln Q_{1/2}` evaluated through [`bhattacharyya_deficit`].
pub fn bhattacharyya_exponent(spec: &TransmitterSpec, cfg: &TargetConfig) -> Result<f64> {
    Ok(-(-bhattacharyya_deficit(spec, cfg)?).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::overlap::q_s_general;
    use crate::target::make_pair;
    use approx::assert_relative_eq;

    fn general(spec: &TransmitterSpec, cfg: &TargetConfig, s: f64) -> f64 {
        let p = make_pair(spec, cfg).unwrap();
        q_s_general(&p.rho0, &p.rho1, s).unwrap()
    }

    #[test]
    fn agrees_with_general_route() {
        for kind in TransmitterKind::ALL {
            let ns = if kind == TransmitterKind::Vacuum { 0.0 } else { 0.7 };
            let spec = TransmitterSpec::new(kind, ns).unwrap();
            for model in [TargetModel::Agnostic, TargetModel::Legacy] {
                let cfg = TargetConfig::new(0.15, 1.3, model).unwrap();
                if kind == TransmitterKind::Vacuum && model == TargetModel::Legacy {
                    continue;
                }
                for s in [0.2, 0.5, 0.8] {
                    let a = q_s_standard(&spec, &cfg, s).unwrap();
                    assert_relative_eq!(a, general(&spec, &cfg, s), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn legacy_vacuum_is_exactly_one() {
        let cfg = TargetConfig::legacy(0.1, 1.0).unwrap();
        let q = q_s_standard(&TransmitterSpec::vacuum(), &cfg, 0.4).unwrap();
        assert_relative_eq!(q, 1.0, epsilon = 1e-15);
        assert!(bhattacharyya_deficit(&TransmitterSpec::vacuum(), &cfg).unwrap() < 1e-30);
    }

    #[test]
    fn extended_deficit_matches_double_where_resolvable() {
        let cfg = TargetConfig::agnostic(0.05, 3.0).unwrap();
        for spec in [
            TransmitterSpec::coherent(0.5).unwrap(),
            TransmitterSpec::smsv(0.5).unwrap(),
            TransmitterSpec::tmss(0.5).unwrap(),
        ] {
            let d = bhattacharyya_deficit(&spec, &cfg).unwrap();
            let q = general(&spec, &cfg, 0.5);
            assert_relative_eq!(d, 1.0 - q, max_relative = 1e-9);
        }
    }

    #[test]
    fn tiny_kappa_vacuum_deficit() {
        // 1 − Q_{1/2} → κ²(N_B − 1)/(8 N_B) for the vacuum probe at large N_B
        let (k, nb) = (1e-9, 1e3);
        let cfg = TargetConfig::agnostic(k, nb).unwrap();
        let d = bhattacharyya_deficit(&TransmitterSpec::vacuum(), &cfg).unwrap();
        assert_relative_eq!(d / (k * k * (nb - 1.0) / (8.0 * nb)), 1.0, max_relative = 1e-3);
    }

    /// Bhattacharyya exponent ratios tmss/coherent at N_B = 1e4, frozen from
    /// a 60-digit evaluation of the Williamson route.
    #[test]
    fn limit_ratios_match_high_precision_oracle() {
        let cases = [
            (TargetModel::Legacy, 1e-4, 1e-6, 3.9209959191914296),
            (TargetModel::Agnostic, 1e-4, 1e-8, 2.9473630821975427),
            (TargetModel::Agnostic, 1e-4, 1e-10, 3.9064643243615893),
            (TargetModel::Agnostic, 1e-10, 1e-3, 1.0000000000600274),
        ];
        for (model, ns, k, expect) in cases {
            let cfg = TargetConfig::new(k, 1e4, model).unwrap();
            let t = bhattacharyya_exponent(&TransmitterSpec::tmss(ns).unwrap(), &cfg).unwrap();
            let c = bhattacharyya_exponent(&TransmitterSpec::coherent(ns).unwrap(), &cfg).unwrap();
            assert_relative_eq!(t / c, expect, max_relative = 1e-9);
        }
    }
}
