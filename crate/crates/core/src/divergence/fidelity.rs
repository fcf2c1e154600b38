//! Uhlmann fidelity `F(ρ, σ) = tr √(√ρ σ √ρ)` of single-mode Gaussian states.

use crate::error::{Error, Result};
use crate::symplectic::GaussianState;

/// Root fidelity, in `[0, 1]`.
///
/// `F² = exp(−½ dᵀ (V₁+V₂)⁻¹ d) / (√(Δ+δ) − √δ)` with `Δ = det(V₁+V₂)` and
/// `δ = 4 (det V₁ − ¼)(det V₂ − ¼)`, vacuum covariance `I/2`.
pub fn fidelity(rho0: &GaussianState, rho1: &GaussianState) -> Result<f64> {
    if rho0.n_modes() != rho1.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: rho0.n_modes(),
            found: rho1.n_modes(),
        });
    }
    if rho0.n_modes() != 1 {
        return Err(Error::Unsupported(
            "fidelity is implemented for single-mode states only".into(),
        ));
    }
    let sum = rho0.cov() + rho1.cov();
    let big = sum.determinant();
    let small = (4.0 * (rho0.cov().determinant() - 0.25) * (rho1.cov().determinant() - 0.25)).max(0.0);
    // √(Δ+δ) − √δ without cancellation
    let denom = big / ((big + small).sqrt() + small.sqrt());
    let d = rho1.mean() - rho0.mean();
    let inv = sum
        .try_inverse()
        .ok_or(Error::NearSingular(big))?;
    let quad = d.dot(&(inv * &d));
    let f2 = (-0.5 * quad).exp() / denom;
    if !f2.is_finite() {
        return Err(Error::NonFinite("fidelity"));
    }
    Ok(f2.sqrt().min(1.0))
}
