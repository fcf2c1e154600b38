//! Overlaps, fidelities and low-order moments of truncated operators.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen, Vector2};

use super::{hermitian_defect, Complex64, FockOperator};
use crate::error::{check_param, Error, Result};

/// Clamped spectrum and eigenvectors.
struct Spectrum {
    values: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn spectrum(op: &FockOperator) -> Result<Spectrum> {
    let m = op.matrix();
    let dev = hermitian_defect(m);
    if dev > 1e-12 {
        return Err(Error::NotHermitian(dev));
    }
    let (values, vectors) = if is_real(m) {
        let e = SymmetricEigen::new(m.map(|z| z.re));
        (e.eigenvalues, e.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let e = SymmetricEigen::new(m.clone());
        (e.eigenvalues, e.eigenvectors)
    };
    if let Some(min) = values.iter().copied().reduce(f64::min) {
        if min < -1e-10 {
            return Err(Error::NotPositiveDefinite(min));
        }
    }
    Ok(Spectrum {
        values: values.map(|v| v.max(0.0)),
        vectors,
    })
}

fn same_shape(a: &FockOperator, b: &FockOperator) -> Result<()> {
    if a.dim() != b.dim() || a.n_modes() != b.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `tr ρ^s σ^{1−s}` from the clamped spectra.
pub fn q_s_fock(rho: &FockOperator, sigma: &FockOperator, s: f64) -> Result<f64> {
    Ok(q_s_fock_many(rho, sigma, &[s])?[0])
}

/// [`q_s_fock`] at several `s`, sharing the two eigendecompositions.
pub fn q_s_fock_many(rho: &FockOperator, sigma: &FockOperator, s: &[f64]) -> Result<Vec<f64>> {
    same_shape(rho, sigma)?;
    for &x in s {
        check_param("s", x, x > 0.0 && x < 1.0, "must lie in (0, 1)")?;
    }
    let a = spectrum(rho)?;
    let b = spectrum(sigma)?;
    let overlap = a.vectors.adjoint() * &b.vectors;
    let weights = overlap.map(|z| z.norm_sqr());
    Ok(s.iter()
        .map(|&x| {
            let la = a.values.map(|v| v.powf(x));
            let lb = b.values.map(|v| v.powf(1.0 - x));
            (la.transpose() * &weights * lb)[(0, 0)]
        })
        .collect())
}

/// Root fidelity `tr √(√ρ σ √ρ)`.
pub fn fidelity_fock(rho: &FockOperator, sigma: &FockOperator) -> Result<f64> {
    same_shape(rho, sigma)?;
    let a = spectrum(rho)?;
    spectrum(sigma)?;
    let sqrt_diag = DMatrix::from_diagonal(&a.values.map(|v| Complex64::new(v.sqrt(), 0.0)));
    let root = &a.vectors * sqrt_diag * a.vectors.adjoint();
    let mut m = &root * sigma.matrix() * &root;
    m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let inner = FockOperator::new(rho.n_modes(), rho.cutoff(), m)?;
    let e = spectrum(&inner)?;
    Ok(e.values.iter().map(|v| v.sqrt()).sum())
}

/// Reduced operator on one mode.
fn reduce_to(op: &FockOperator, mode: usize) -> Result<DMatrix<Complex64>> {
    if mode >= op.n_modes() {
        return Err(Error::InvalidModes(format!(
            "mode {mode} out of range for {} modes",
            op.n_modes()
        )));
    }
    let d = op.cutoff();
    let inner = d.pow((op.n_modes() - 1 - mode) as u32);
    let outer = op.dim() / (d * inner);
    let m = op.matrix();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for o in 0..outer {
            for r in 0..inner {
                acc += m[((o * d + i) * inner + r, (o * d + j) * inner + r)];
            }
        }
        acc
    }))
}

/// First and second moments of `(q, p)` for one mode, vacuum variance 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

pub fn quadrature_moments(op: &FockOperator, mode: usize) -> Result<QuadratureMoments> {
    let r = reduce_to(op, mode)?;
    let d = r.nrows();
    let tr = r.trace().re;
    // ⟨a⟩ = Σ √n ρ[n, n−1], ⟨a²⟩ = Σ √(n(n−1)) ρ[n, n−2]
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n_avg = 0.0;
    for n in 0..d {
        let nf = n as f64;
        n_avg += nf * r[(n, n)].re;
        if n >= 1 {
            a1 += r[(n, n - 1)] * nf.sqrt();
        }
        if n >= 2 {
            a2 += r[(n, n - 2)] * (nf * (nf - 1.0)).sqrt();
        }
    }
    let mean = Vector2::new(2f64.sqrt() * a1.re, 2f64.sqrt() * a1.im);
    let qq = a2.re + n_avg + 0.5 * tr - mean[0] * mean[0];
    let pp = -a2.re + n_avg + 0.5 * tr - mean[1] * mean[1];
    let qp = a2.im - mean[0] * mean[1];
    Ok(QuadratureMoments {
        mean,
        cov: Matrix2::new(qq, qp, qp, pp),
    })
}

/// `⟨a†a⟩` of one mode.
pub fn mean_photon_number(op: &FockOperator, mode: usize) -> Result<f64> {
    let r = reduce_to(op, mode)?;
    Ok((0..r.nrows()).map(|n| n as f64 * r[(n, n)].re).sum())
}
