//! `Q_s = tr ρ₀^s ρ₁^{1−s}` for Gaussian states.

use nalgebra::{DMatrix, DVector};

use super::functions::{ln_g_lambda, PURE_SNAP};
use crate::error::{check_param, Error, Result};
use crate::symplectic::{GaussianState, WilliamsonDecomposition};

/// Largest excess of `Q_s` over 1 that is attributed to rounding.
pub const OVERSHOOT_TOL: f64 = 1e-10;

fn check_s(s: f64) -> Result<()> {
    check_param("s", s, s > 0.0 && s < 1.0, "must lie in (0, 1)")
}

/// Williamson data of a hypothesis pair, computed once and reused for every `s`.
///
/// Works in the doubled convention: symplectic eigenvalues enter as `2ν` and
/// the mean difference as `√2 (m₁ − m₀)`.
#[derive(Debug, Clone)]
pub struct GaussianOverlap {
    n: usize,
    w0: WilliamsonDecomposition,
    w1: WilliamsonDecomposition,
    s0_inv: DMatrix<f64>,
    s1_inv: DMatrix<f64>,
    delta: DVector<f64>,
}

impl GaussianOverlap {
    pub fn new(rho0: &GaussianState, rho1: &GaussianState) -> Result<Self> {
        if rho0.n_modes() != rho1.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: rho0.n_modes(),
                found: rho1.n_modes(),
            });
        }
        let w0 = rho0.williamson()?;
        let w1 = rho1.williamson()?;
        Ok(GaussianOverlap {
            n: rho0.n_modes(),
            s0_inv: w0.s_inv(),
            s1_inv: w1.s_inv(),
            w0,
            w1,
            delta: (rho1.mean() - rho0.mean()) * std::f64::consts::SQRT_2,
        })
    }

    /// `ln Q_s`.
    pub fn ln_q(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        let dim = 2 * self.n;
        let mut ln_pref = self.n as f64 * std::f64::consts::LN_2;
        let mut lam0 = DVector::zeros(dim);
        let mut lam1 = DVector::zeros(dim);
        for k in 0..self.n {
            let (g0, l0) = ln_g_lambda(s, 2.0 * self.w0.nu[k]);
            let (g1, l1) = ln_g_lambda(1.0 - s, 2.0 * self.w1.nu[k]);
            ln_pref += g0 + g1;
            lam0[2 * k] = l0;
            lam0[2 * k + 1] = l0;
            lam1[2 * k] = l1;
            lam1[2 * k + 1] = l1;
        }
        let mut sigma = &self.s0_inv * DMatrix::from_diagonal(&lam0) * self.s0_inv.transpose()
            + &self.s1_inv * DMatrix::from_diagonal(&lam1) * self.s1_inv.transpose();
        sigma = (&sigma + sigma.transpose()) * 0.5;
        let chol = sigma
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NotPositiveDefinite(sigma.symmetric_eigenvalues().min()))?;
        let ln_det: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let quad = self.delta.dot(&chol.solve(&self.delta));
        let ln_q = ln_pref - 0.5 * ln_det - 0.5 * quad;
        clamp_ln_q(ln_q)
    }

    pub fn q(&self, s: f64) -> Result<f64> {
        Ok(self.ln_q(s)?.exp())
    }
}

pub(crate) fn clamp_ln_q(ln_q: f64) -> Result<f64> {
    if !ln_q.is_finite() {
        return Err(Error::NonFinite("ln Q_s"));
    }
    if ln_q > OVERSHOOT_TOL {
        return Err(Error::Numerical(format!(
            "Q_s exceeds 1 by {:e}",
            ln_q.exp_m1()
        )));
    }
    Ok(ln_q.min(0.0))
}

/// `Q_s(ρ₀, ρ₁)` via the symplectic diagonalizations of both covariances.
pub fn q_s_general(rho0: &GaussianState, rho1: &GaussianState, s: f64) -> Result<f64> {
    GaussianOverlap::new(rho0, rho1)?.q(s)
}

pub fn ln_q_s_general(rho0: &GaussianState, rho1: &GaussianState, s: f64) -> Result<f64> {
    GaussianOverlap::new(rho0, rho1)?.ln_q(s)
}

/// Closed form of `Q_s` for the coherent-state pair of the agnostic model.
///
/// With `u = N_B`, `v = (1−κ)N_B`, `D_u = (u+1)^s − u^s`,
/// `D_v = (v+1)^{1−s} − v^{1−s}` and `W = (u+1)^s (v+1)^{1−s} − u^s v^{1−s}`:
/// `Q_s = exp(−κ N_S D_u D_v / W) / W`.
pub fn q_s_coherent_closed(s: f64, kappa: f64, n_b: f64, n_s: f64) -> Result<f64> {
    check_s(s)?;
    check_param("kappa", kappa, (0.0..1.0).contains(&kappa), "must lie in [0, 1)")?;
    check_param("n_b", n_b, n_b >= 0.0, "must be non-negative")?;
    check_param("n_s", n_s, n_s >= 0.0, "must be non-negative")?;
    let (du, dv, w) = if n_b == 0.0 {
        (1.0, 1.0, 1.0)
    } else {
        let u = n_b;
        let v = (1.0 - kappa) * n_b;
        let lu = u.recip().ln_1p();
        let lv = v.recip().ln_1p();
        let du = u.powf(s) * (s * lu).exp_m1();
        let dv = v.powf(1.0 - s) * ((1.0 - s) * lv).exp_m1();
        let w = u.powf(s) * v.powf(1.0 - s) * (s * lu + (1.0 - s) * lv).exp_m1();
        (du, dv, w)
    };
    let ln_q = -kappa * n_s * du * dv / w - w.ln();
    Ok(clamp_ln_q(ln_q)?.exp())
}

/// `(2ν+1)^p ± (2ν−1)^p`, with the pure-state term set to exactly zero.
fn power_pair(p: f64, nu: f64) -> (f64, f64) {
    let up = (2.0 * nu + 1.0).powf(p);
    let w = 2.0 * nu - 1.0;
    if w < PURE_SNAP {
        return (up, up);
    }
    let diff = w.powf(p) * (p * (2.0 / w).ln_1p()).exp_m1();
    (up + w.powf(p), diff)
}

/// `F₀(s, ν₀, ν₁)`; `F₁(s, ν₀, ν₁) = F₀(1−s, ν₁, ν₀)`.
pub fn f0(s: f64, nu0: f64, nu1: f64) -> f64 {
    power_pair(s, nu0).0 * power_pair(1.0 - s, nu1).1 / 4.0
}

pub fn f1(s: f64, nu0: f64, nu1: f64) -> f64 {
    f0(1.0 - s, nu1, nu0)
}

/// `Q_s` for zero-mean single-mode states from the `F₀/F₁` form
/// `Q_s = c · det(F₀ S₀S₀ᵀ + F₁ S₁S₁ᵀ)^{−1/2}`, where `Σ = ν S Sᵀ`.
///
/// The constant is `c = 1`, fixed by `Q_s(ρ, ρ) = 1`; the prefactor 2 that
/// sometimes accompanies this form gives `Q_s(ρ, ρ) = 2`.
pub fn q_s_alt(rho0: &GaussianState, rho1: &GaussianState, s: f64) -> Result<f64> {
    check_s(s)?;
    for st in [rho0, rho1] {
        if st.n_modes() != 1 {
            return Err(Error::Unsupported(
                "the F0/F1 form is defined for single-mode states".into(),
            ));
        }
        if st.mean().iter().any(|&m| m != 0.0) {
            return Err(Error::Unsupported(
                "the F0/F1 form requires zero-mean states".into(),
            ));
        }
    }
    let w0 = rho0.williamson()?;
    let w1 = rho1.williamson()?;
    let (nu0, nu1) = (w0.nu[0], w1.nu[0]);
    let a0 = w0.s_inv() * w0.s_inv().transpose();
    let a1 = w1.s_inv() * w1.s_inv().transpose();
    let m = a0 * f0(s, nu0, nu1) + a1 * f1(s, nu0, nu1);
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::NotPositiveDefinite(det));
    }
    Ok(clamp_ln_q(-0.5 * det.ln())?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::{make_pair, TargetConfig};
    use crate::transmitters::{thermal_state, TransmitterSpec};
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn coherent_pair(ns: f64, nb: f64, k: f64) -> (GaussianState, GaussianState) {
        let p = make_pair(
            &TransmitterSpec::coherent(ns).unwrap(),
            &TargetConfig::agnostic(k, nb).unwrap(),
        )
        .unwrap();
        (p.rho0, p.rho1)
    }

    #[test]
    fn identical_states_give_one() {
        for nb in [0.0, 0.4, 20.0] {
            let t = thermal_state(nb).unwrap();
            for s in [0.1, 0.5, 0.9] {
                assert_relative_eq!(q_s_general(&t, &t, s).unwrap(), 1.0, epsilon = 1e-14);
                assert_relative_eq!(q_s_alt(&t, &t, s).unwrap(), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn pure_coherent_overlap() {
        // two pure coherent states: Q_s = |⟨α|β⟩|² = exp(−|α−β|²)
        let a = GaussianState::new(DVector::from_row_slice(&[0.3, -0.2]), DMatrix::identity(2, 2) * 0.5)
            .unwrap();
        let b = GaussianState::vacuum(1);
        let expect = (-(0.3f64.powi(2) + 0.2f64.powi(2)) / 2.0f64).exp();
        assert_relative_eq!(q_s_general(&a, &b, 0.37).unwrap(), expect, max_relative = 1e-13);
    }

    #[test]
    fn thermal_pair_at_half() {
        // tr √ρ √σ for thermal states with ratios x, y: (1−x)^½(1−y)^½ / (1 − √(xy))
        let (n1, n2) = (1.0f64, 2.0f64);
        let (x, y) = (n1 / (n1 + 1.0), n2 / (n2 + 1.0));
        let expect = ((1.0 - x) * (1.0 - y)).sqrt() / (1.0 - (x * y).sqrt());
        let q = q_s_general(&thermal_state(n1).unwrap(), &thermal_state(n2).unwrap(), 0.5).unwrap();
        assert_relative_eq!(q, expect, max_relative = 1e-13);
    }

    #[test]
    fn closed_form_matches_general() {
        for &(s, k, nb, ns) in &[(0.3, 0.1, 0.7, 0.4), (0.5, 0.2, 2.0, 1.0), (0.7, 0.05, 0.3, 3.0)] {
            let (r0, r1) = coherent_pair(ns, nb, k);
            let g = q_s_general(&r0, &r1, s).unwrap();
            assert_relative_eq!(q_s_coherent_closed(s, k, nb, ns).unwrap(), g, max_relative = 1e-12);
        }
    }

    #[test]
    fn closed_form_trivial_points() {
        assert_eq!(q_s_coherent_closed(0.4, 0.0, 3.0, 0.0).unwrap(), 1.0);
        let q = q_s_coherent_closed(0.5, 0.2, 0.0, 0.3).unwrap();
        assert_relative_eq!(q, (-0.06f64).exp(), max_relative = 1e-14);
    }

    /// Closed form with an inverted, 4× exponent and one wrong power. It does
    /// not reduce to the log-determinant overlap, so it disagrees with every
    /// other route.
    fn faulty_closed_form(s: f64, k: f64, nb: f64, ns: f64) -> f64 {
        let num = (nb + 1.0).powf(s) * ((1.0 - k) * nb + 1.0).powf(1.0 - s) - nb * (1.0 - k).powf(1.0 - s);
        let den = ((nb + 1.0).powf(s) - nb.powf(s))
            * (((1.0 - k) * nb + 1.0).powf(1.0 - s) - (1.0 - k).powf(s) * nb.powf(1.0 - s));
        (-4.0 * k * ns * num / den).exp()
            / ((1.0 + nb) * (1.0 - k * nb / (1.0 + nb)).powf(1.0 - s) - nb * (1.0 - k).powf(1.0 - s))
    }

    #[test]
    fn faulty_exponent_disagrees() {
        let (s, k, nb, ns) = (0.3, 0.1, 0.7, 0.4);
        let (r0, r1) = coherent_pair(ns, nb, k);
        let g = q_s_general(&r0, &r1, s).unwrap();
        assert!((faulty_closed_form(s, k, nb, ns) - g).abs() > 0.1);
        // without a signal only the (correct) denominator remains
        let (r0, r1) = coherent_pair(0.0, nb, k);
        let g = q_s_general(&r0, &r1, s).unwrap();
        assert_relative_eq!(faulty_closed_form(s, k, nb, 0.0), g, max_relative = 1e-12);
    }

    #[test]
    fn alt_form_matches_general_for_squeezed_pair() {
        let p = make_pair(
            &TransmitterSpec::smsv(0.5).unwrap(),
            &TargetConfig::agnostic(1e-3, 200.0).unwrap(),
        )
        .unwrap();
        let g = q_s_general(&p.rho0, &p.rho1, 0.5).unwrap();
        assert_relative_eq!(q_s_alt(&p.rho0, &p.rho1, 0.5).unwrap(), g, max_relative = 1e-10);
    }

    #[test]
    fn alt_form_rejects_displaced_and_two_mode() {
        let (r0, r1) = coherent_pair(1.0, 1.0, 0.1);
        assert!(q_s_alt(&r0, &r1, 0.5).is_err());
        let v = GaussianState::vacuum(2);
        assert!(q_s_alt(&v, &v, 0.5).is_err());
    }

    #[test]
    fn f_functions() {
        assert_relative_eq!(f1(0.3, 1.0, 2.0), f0(0.7, 2.0, 1.0));
        // pure states: F₀ = 2^s · 2^{1−s} / 4
        assert_relative_eq!(f0(0.3, 0.5, 0.5), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn s_out_of_range() {
        let t = thermal_state(1.0).unwrap();
        assert!(q_s_general(&t, &t, 0.0).is_err());
        assert!(q_s_general(&t, &t, 1.0).is_err());
        assert!(q_s_coherent_closed(1.2, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn swap_symmetry() {
        let (r0, r1) = coherent_pair(0.8, 1.3, 0.2);
        for s in [0.2, 0.5, 0.65] {
            let a = q_s_general(&r0, &r1, s).unwrap();
            let b = q_s_general(&r1, &r0, 1.0 - s).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }
}
