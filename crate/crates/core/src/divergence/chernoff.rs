//! Quantum Chernoff exponent `ξ = −ln inf_s Q_s` and the Bhattacharyya bound.

use serde::{Deserialize, Serialize};

use super::overlap::GaussianOverlap;
use crate::error::{Error, Result};
use crate::minimize::{minimize_unit_interval, MinimizeOptions};
use crate::target::HypothesisPair;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernoffFlags {
    /// `ρ₀ = ρ₁`: nothing to minimize, `ξ = 0`.
    pub degenerate: bool,
    /// `ln Q_s` is constant to within the flatness tolerance; `s* = 1/2`.
    pub flat: bool,
    /// The minimizer hit its iteration cap.
    pub unconverged: bool,
}

impl ChernoffFlags {
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.degenerate {
            out.push("degenerate");
        }
        if self.flat {
            out.push("flat");
        }
        if self.unconverged {
            out.push("unconverged");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChernoffResult {
    pub s_star: f64,
    pub q_star: f64,
    /// `−ln Q_{s*}`, taken from the log-domain objective.
    pub xi: f64,
    pub q_half: f64,
    pub converged: bool,
    /// Absolute tolerance on `s*` that the minimizer was asked to reach.
    pub achieved_tol: f64,
    pub iterations: u64,
    pub flags: ChernoffFlags,
}

impl ChernoffResult {
    pub fn degenerate() -> Self {
        ChernoffResult {
            s_star: 0.5,
            q_star: 1.0,
            xi: 0.0,
            q_half: 1.0,
            converged: true,
            achieved_tol: 0.0,
            iterations: 0,
            flags: ChernoffFlags {
                degenerate: true,
                ..ChernoffFlags::default()
            },
        }
    }

    /// `−ln Q_{1/2}`.
    pub fn bhattacharyya_exponent(&self) -> f64 {
        -self.q_half.ln()
    }
}

/// Minimizes an arbitrary `s ↦ ln Q_s`.
pub fn chernoff_with<F>(ln_q: F, opts: &MinimizeOptions) -> Result<ChernoffResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let ln_half = ln_q(0.5)?;
    let m = minimize_unit_interval(&ln_q, opts)?;
    // the objective is convex, so s = 1/2 can only win by rounding
    let (s_star, ln_star) = if m.fx <= ln_half { (m.x, m.fx) } else { (0.5, ln_half) };
    if !ln_star.is_finite() {
        return Err(Error::NonFinite("ln Q_s*"));
    }
    Ok(ChernoffResult {
        s_star,
        q_star: ln_star.exp(),
        xi: -ln_star,
        q_half: ln_half.exp(),
        converged: m.converged,
        achieved_tol: opts.x_tol,
        iterations: m.iterations,
        flags: ChernoffFlags {
            degenerate: false,
            flat: m.flat,
            unconverged: !m.converged,
        },
    })
}

pub fn chernoff(pair: &HypothesisPair) -> Result<ChernoffResult> {
    chernoff_opts(pair, &MinimizeOptions::default())
}

pub fn chernoff_opts(pair: &HypothesisPair, opts: &MinimizeOptions) -> Result<ChernoffResult> {
    if pair.degenerate {
        return Ok(ChernoffResult::degenerate());
    }
    let ov = GaussianOverlap::new(&pair.rho0, &pair.rho1)?;
    chernoff_with(|s| ov.ln_q(s), opts)
}

/// `½ Q_{1/2}^N`.
pub fn bhattacharyya_error_bound(pair: &HypothesisPair, n_copies: u64) -> Result<f64> {
    if pair.degenerate || n_copies == 0 {
        return Ok(0.5);
    }
    let ln_half = GaussianOverlap::new(&pair.rho0, &pair.rho1)?.ln_q(0.5)?;
    Ok(0.5 * (n_copies as f64 * ln_half).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::{make_pair, TargetConfig};
    use crate::transmitters::TransmitterSpec;
    use approx::assert_relative_eq;

    fn coherent(ns: f64, nb: f64, k: f64) -> HypothesisPair {
        make_pair(
            &TransmitterSpec::coherent(ns).unwrap(),
            &TargetConfig::agnostic(k, nb).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn degenerate_pair() {
        let p = make_pair(&TransmitterSpec::vacuum(), &TargetConfig::legacy(0.1, 1.0).unwrap()).unwrap();
        let r = chernoff(&p).unwrap();
        assert_eq!(r.xi, 0.0);
        assert_eq!(r.q_star, 1.0);
        assert!(r.flags.degenerate);
        assert_eq!(bhattacharyya_error_bound(&p, 17).unwrap(), 0.5);
    }

    #[test]
    fn result_invariants() {
        let p = coherent(1.0, 2.0, 0.3);
        let r = chernoff(&p).unwrap();
        assert!(r.converged && !r.flags.flat);
        assert!(r.q_star <= r.q_half + 1e-12);
        assert_relative_eq!(r.xi, -r.q_star.ln(), max_relative = 1e-14);
        let ov = GaussianOverlap::new(&p.rho0, &p.rho1).unwrap();
        for i in 1..100 {
            assert!(r.q_star <= ov.q(i as f64 / 100.0).unwrap() + 1e-15);
        }
    }

    #[test]
    fn bound_with_no_copies() {
        assert_eq!(bhattacharyya_error_bound(&coherent(1.0, 1.0, 0.1), 0).unwrap(), 0.5);
    }

    #[test]
    fn bound_decays_with_copies() {
        let p = coherent(1.0, 1.0, 0.1);
        let a = bhattacharyya_error_bound(&p, 10).unwrap();
        let b = bhattacharyya_error_bound(&p, 20).unwrap();
        assert!(b < a && a < 0.5);
        assert_relative_eq!(b, 2.0 * a * a, max_relative = 1e-12);
    }

    #[test]
    fn flags_render() {
        let f = ChernoffFlags {
            degenerate: true,
            flat: false,
            unconverged: true,
        };
        assert_eq!(f.labels(), vec!["degenerate", "unconverged"]);
    }
}
