//! Phase-space linear algebra for Gaussian states.
//!
//! Conventions: quadratures are ordered `(q_1, p_1, ..., q_n, p_n)` with
//! `[q_j, p_k] = i δ_jk`, so the vacuum covariance is `I/2` and every
//! symplectic eigenvalue of a physical state is at least `1/2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{check_param, Error, Result};

/// Numerical tolerances shared by the phase-space routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative asymmetry accepted in a covariance matrix.
    pub symmetry: f64,
    /// Slack below `1/2` accepted for symplectic eigenvalues.
    pub physicality: f64,
    /// Smallest ordinary eigenvalue accepted before a matrix counts as singular.
    pub singular: f64,
    /// Frobenius-norm slack in `S Δ Sᵀ = Δ`.
    pub symplectic: f64,
}

pub const DEFAULT_TOLERANCES: Tolerances = Tolerances {
    symmetry: 1e-12,
    physicality: 1e-10,
    singular: 1e-14,
    symplectic: 1e-10,
};

impl Default for Tolerances {
    fn default() -> Self {
        DEFAULT_TOLERANCES
    }
}

/// The block-diagonal form `⊕ [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    pub n_modes: usize,
    pub matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        let mut matrix = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for k in 0..n_modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        SymplecticForm { n_modes, matrix }
    }
}

pub(crate) fn omega(n_modes: usize) -> DMatrix<f64> {
    SymplecticForm::new(n_modes).matrix
}

/// `‖S Δ Sᵀ − Δ‖_F`; zero exactly when `s` is symplectic.
pub fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows() / 2;
    let om = omega(n);
    (s * &om * s.transpose() - om).norm()
}

/// First and second moments of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validated constructor: symmetric covariance, finite mean and
    /// symplectic eigenvalues no smaller than `1/2`.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(mean, cov, &DEFAULT_TOLERANCES)
    }

    pub fn with_tolerances(
        mean: DVector<f64>,
        cov: DMatrix<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if cov.nrows() != cov.ncols() {
            return Err(Error::DimensionMismatch {
                expected: cov.nrows(),
                found: cov.ncols(),
            });
        }
        if cov.nrows() == 0 || !cov.nrows().is_multiple_of(2) {
            return Err(Error::InvalidModes(format!(
                "covariance dimension {} is not a positive even number",
                cov.nrows()
            )));
        }
        if mean.len() != cov.nrows() {
            return Err(Error::DimensionMismatch {
                expected: cov.nrows(),
                found: mean.len(),
            });
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("mean vector"));
        }
        let w = williamson_with(&cov, tol)?;
        let nu_min = w.nu[0];
        if nu_min < 0.5 - tol.physicality {
            return Err(Error::Unphysical(nu_min));
        }
        let cov = symmetrized(&cov);
        Ok(GaussianState { mean, cov })
    }

    /// Skips validation; for states produced by trusted constructions.
    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        GaussianState {
            mean,
            cov: symmetrized(&cov),
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn williamson(&self) -> Result<WilliamsonDecomposition> {
        williamson(&self.cov)
    }

    /// Product state `self ⊗ other`; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let n1 = self.mean.len();
        let n2 = other.mean.len();
        let mut mean = DVector::zeros(n1 + n2);
        mean.rows_mut(0, n1).copy_from(&self.mean);
        mean.rows_mut(n1, n2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(n1 + n2, n1 + n2);
        cov.view_mut((0, 0), (n1, n1)).copy_from(&self.cov);
        cov.view_mut((n1, n1), (n2, n2)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    /// Mean photon number of mode `k`: `(tr Σ_kk + |m_k|²)/2 − 1/2`.
    pub fn mean_photon_number(&self, k: usize) -> f64 {
        let (q, p) = (2 * k, 2 * k + 1);
        0.5 * (self.cov[(q, q)] + self.cov[(p, p)] + self.mean[q].powi(2) + self.mean[p].powi(2))
            - 0.5
    }

    /// Largest absolute entrywise difference of means and covariances.
    pub fn max_abs_diff(&self, other: &GaussianState) -> f64 {
        if self.mean.len() != other.mean.len() {
            return f64::INFINITY;
        }
        let dm = (&self.mean - &other.mean).amax();
        let dc = (&self.cov - &other.cov).amax();
        dm.max(dc)
    }
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Symplectic action `mean → S·mean + d`, `cov → S cov Sᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianUnitary {
    pub s: DMatrix<f64>,
    pub d: DVector<f64>,
}

impl GaussianUnitary {
    pub fn identity(n_modes: usize) -> Self {
        GaussianUnitary {
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
            d: DVector::zeros(2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.d.len() / 2
    }

    pub fn displacement(d: DVector<f64>) -> Self {
        let n = d.len();
        GaussianUnitary {
            s: DMatrix::identity(n, n),
            d,
        }
    }

    /// Beamsplitter of reflectivity `kappa` between `mode_a` and `mode_b`:
    /// `a → √κ a − √(1−κ) b`, `b → √(1−κ) a + √κ b`.
    pub fn beamsplitter(kappa: f64, mode_a: usize, mode_b: usize, n_modes: usize) -> Result<Self> {
        check_param("kappa", kappa, kappa > 0.0 && kappa < 1.0, "must lie in (0, 1)")?;
        Self::beamsplitter_closed(kappa, mode_a, mode_b, n_modes)
    }

    /// Same as [`GaussianUnitary::beamsplitter`] but also accepts the endpoints `0` and `1`.
    pub(crate) fn beamsplitter_closed(
        kappa: f64,
        mode_a: usize,
        mode_b: usize,
        n_modes: usize,
    ) -> Result<Self> {
        check_modes(&[mode_a, mode_b], n_modes)?;
        let t = kappa.sqrt();
        let r = (1.0 - kappa).sqrt();
        let mut u = Self::identity(n_modes);
        for quad in 0..2 {
            let (ia, ib) = (2 * mode_a + quad, 2 * mode_b + quad);
            u.s[(ia, ia)] = t;
            u.s[(ia, ib)] = -r;
            u.s[(ib, ia)] = r;
            u.s[(ib, ib)] = t;
        }
        Ok(u)
    }

    /// Single-mode squeezer; positive `r` squeezes `q` by `e^{-r}`.
    pub fn squeezer(r: f64, mode: usize, n_modes: usize) -> Result<Self> {
        check_param("r", r, true, "must be finite")?;
        check_modes(&[mode], n_modes)?;
        let mut u = Self::identity(n_modes);
        u.s[(2 * mode, 2 * mode)] = (-r).exp();
        u.s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
        Ok(u)
    }

    pub fn phase_rotation(phi: f64, mode: usize, n_modes: usize) -> Result<Self> {
        check_param("phi", phi, true, "must be finite")?;
        check_modes(&[mode], n_modes)?;
        let (sn, cs) = phi.sin_cos();
        let mut u = Self::identity(n_modes);
        let (q, p) = (2 * mode, 2 * mode + 1);
        u.s[(q, q)] = cs;
        u.s[(q, p)] = -sn;
        u.s[(p, q)] = sn;
        u.s[(p, p)] = cs;
        Ok(u)
    }

    /// Two-mode squeezer producing `+ sinh` correlations on `qq` and `−` on `pp`.
    pub fn two_mode_squeezer(r: f64, mode_a: usize, mode_b: usize, n_modes: usize) -> Result<Self> {
        check_param("r", r, true, "must be finite")?;
        check_modes(&[mode_a, mode_b], n_modes)?;
        let (ch, sh) = (r.cosh(), r.sinh());
        let mut u = Self::identity(n_modes);
        for (quad, sign) in [(0, 1.0), (1, -1.0)] {
            let (ia, ib) = (2 * mode_a + quad, 2 * mode_b + quad);
            u.s[(ia, ia)] = ch;
            u.s[(ib, ib)] = ch;
            u.s[(ia, ib)] = sign * sh;
            u.s[(ib, ia)] = sign * sh;
        }
        Ok(u)
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &GaussianUnitary) -> GaussianUnitary {
        GaussianUnitary {
            s: &other.s * &self.s,
            d: &other.s * &self.d + &other.d,
        }
    }

    pub fn symplectic_defect(&self) -> f64 {
        symplectic_defect(&self.s)
    }
}

fn check_modes(modes: &[usize], n_modes: usize) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= n_modes {
            return Err(Error::InvalidModes(format!(
                "mode {m} out of range for {n_modes} modes"
            )));
        }
        if modes[..i].contains(&m) {
            return Err(Error::InvalidModes(format!("mode {m} repeated")));
        }
    }
    Ok(())
}

pub fn apply_unitary(state: &GaussianState, u: &GaussianUnitary) -> Result<GaussianState> {
    if u.d.len() != state.mean.len() || u.s.nrows() != state.mean.len() {
        return Err(Error::DimensionMismatch {
            expected: state.mean.len(),
            found: u.d.len(),
        });
    }
    let mean = &u.s * &state.mean + &u.d;
    let cov = &u.s * &state.cov * u.s.transpose();
    Ok(GaussianState::from_parts(mean, cov))
}

/// Reduced state on the modes in `keep`, listed in ascending order.
pub fn partial_trace(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    if keep.is_empty() {
        return Err(Error::InvalidModes("keep set is empty".into()));
    }
    check_modes(keep, state.n_modes())?;
    let mut modes = keep.to_vec();
    modes.sort_unstable();
    let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| state.mean[i]));
    let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| state.cov[(idx[r], idx[c])]);
    Ok(GaussianState { mean, cov })
}

/// `S Σ Sᵀ = ⊕_k ν_k I₂` with `S` symplectic and `ν` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonDecomposition {
    pub nu: Vec<f64>,
    pub s: DMatrix<f64>,
}

impl WilliamsonDecomposition {
    pub fn n_modes(&self) -> usize {
        self.nu.len()
    }

    /// `S⁻¹ = −Δ Sᵀ Δ`, so that `Σ = S⁻¹ (⊕ ν_k I₂) S⁻ᵀ`.
    pub fn s_inv(&self) -> DMatrix<f64> {
        let om = omega(self.n_modes());
        -(&om * self.s.transpose() * &om)
    }

    /// `⊕_k ν_k I₂`.
    pub fn diagonal(&self) -> DMatrix<f64> {
        let n = self.n_modes();
        let mut d = DMatrix::zeros(2 * n, 2 * n);
        for (k, &v) in self.nu.iter().enumerate() {
            d[(2 * k, 2 * k)] = v;
            d[(2 * k + 1, 2 * k + 1)] = v;
        }
        d
    }
}

pub fn williamson(cov: &DMatrix<f64>) -> Result<WilliamsonDecomposition> {
    williamson_with(cov, &DEFAULT_TOLERANCES)
}

/// Williamson normal form via the antisymmetric matrix `M = Σ^{-1/2} Δ Σ^{-1/2}`.
///
/// `M` has eigenvalues `±i/ν_k`. The eigenvectors of the symmetric matrix
/// `MᵀM` (eigenvalues `1/ν_k²`, each doubly degenerate) are grouped into
/// canonical pairs `(u, −ν M u)`, which turn `M` into `⊕ [[0, 1/ν], [−1/ν, 0]]`.
/// With `O` the orthogonal matrix of those pairs, `S = D^{1/2} Oᵀ Σ^{-1/2}`.
pub fn williamson_with(cov: &DMatrix<f64>, tol: &Tolerances) -> Result<WilliamsonDecomposition> {
    let dim = cov.nrows();
    if cov.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: cov.ncols(),
        });
    }
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::InvalidModes(format!(
            "covariance dimension {dim} is not a positive even number"
        )));
    }
    if cov.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("covariance matrix"));
    }
    let scale = cov.amax();
    let asym = (cov - cov.transpose()).amax() / scale.max(f64::MIN_POSITIVE);
    if asym > tol.symmetry {
        return Err(Error::NotSymmetric(asym));
    }
    let n = dim / 2;
    let sym = symmetrized(cov);

    let eig = SymmetricEigen::new(sym);
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite(min_eig));
    }
    if min_eig < tol.singular {
        return Err(Error::NearSingular(min_eig));
    }
    let inv_sqrt_vals = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    let inv_sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&inv_sqrt_vals)
        * eig.eigenvectors.transpose();

    let m = &inv_sqrt * omega(n) * &inv_sqrt;
    let h = symmetrized(&(m.transpose() * &m));
    let heig = SymmetricEigen::new(h.clone());

    // Candidates in order of decreasing 1/ν² (ascending ν).
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| heig.eigenvalues[b].total_cmp(&heig.eigenvalues[a]));
    let candidates: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| heig.eigenvectors.column(i).into_owned())
        .collect();

    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut pairs: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for c in &candidates {
            let r = project_out(c, &basis);
            let nr = r.norm();
            if best.as_ref().is_none_or(|(b, _)| nr > *b + 1e-12) {
                best = Some((nr, r));
            }
        }
        let (nr, r) = best.expect("at least one candidate");
        if nr < 1e-6 {
            return Err(Error::Numerical(
                "williamson: failed to complete a symplectic basis".into(),
            ));
        }
        let mut u = r / nr;
        fix_sign(&mut u);
        let lam = u.dot(&(&h * &u));
        let nu = 1.0 / lam.sqrt();
        let mut v = -(&m * &u) * nu;
        v = project_out(&v, &basis);
        v -= &u * u.dot(&v);
        let nv = v.norm();
        v /= nv;
        basis.push(u.clone());
        basis.push(v.clone());
        pairs.push((nu, u, v));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut o = DMatrix::zeros(dim, dim);
    let mut nu = Vec::with_capacity(n);
    let mut sqrt_d = DVector::zeros(dim);
    for (k, (val, u, v)) in pairs.into_iter().enumerate() {
        o.set_column(2 * k, &u);
        o.set_column(2 * k + 1, &v);
        sqrt_d[2 * k] = val.sqrt();
        sqrt_d[2 * k + 1] = val.sqrt();
        nu.push(val);
    }
    let s = DMatrix::from_diagonal(&sqrt_d) * o.transpose() * inv_sqrt;
    Ok(WilliamsonDecomposition { nu, s })
}

fn project_out(x: &DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    let mut r = x.clone();
    // two passes of Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&r);
            r -= b * c;
        }
    }
    r
}

/// Largest-magnitude component made positive (first index on ties).
fn fix_sign(u: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..u.len() {
        if u[i].abs() > u[best].abs() + 1e-12 {
            best = i;
        }
    }
    if u[best] < 0.0 {
        u.neg_mut();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(v))
    }

    #[test]
    fn omega_squares_to_minus_identity() {
        let om = SymplecticForm::new(3).matrix;
        assert_eq!(om.transpose(), -&om);
        assert_eq!(&om * &om, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn vacuum_is_its_own_normal_form() {
        let w = williamson(&(DMatrix::identity(2, 2) * 0.5)).unwrap();
        assert_relative_eq!(w.nu[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(w.s, DMatrix::identity(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn squeezed_thermal_normal_form() {
        let (n, r) = (0.3f64, 0.4f64);
        let cov = diag(&[(n + 0.5) * (-2.0 * r).exp(), (n + 0.5) * (2.0 * r).exp()]);
        let w = williamson(&cov).unwrap();
        assert_relative_eq!(w.nu[0], 0.8, epsilon = 1e-14);
        assert_relative_eq!(w.s, diag(&[r.exp(), (-r).exp()]), epsilon = 1e-13);
    }

    #[test]
    fn tmss_is_pure() {
        let ns = 1.7f64;
        let c = (ns * (ns + 1.0)).sqrt();
        let a = ns + 0.5;
        let cov = DMatrix::from_row_slice(
            4,
            4,
            &[a, 0., c, 0., 0., a, 0., -c, c, 0., a, 0., 0., -c, 0., a],
        );
        let w = williamson(&cov).unwrap();
        for nu in &w.nu {
            assert_relative_eq!(*nu, 0.5, epsilon = 1e-12);
        }
        assert!(symplectic_defect(&w.s) < 1e-10);
        let back = &w.s * &cov * w.s.transpose();
        assert_relative_eq!(back, w.diagonal(), epsilon = 1e-10);
    }

    #[test]
    fn rejects_bad_covariances() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.1, 1.0]);
        assert!(matches!(williamson(&asym), Err(Error::NotSymmetric(_))));
        let indefinite = diag(&[1.0, -1.0]);
        assert!(matches!(
            williamson(&indefinite),
            Err(Error::NotPositiveDefinite(_))
        ));
        let singular = diag(&[1.0, 1e-16]);
        assert!(matches!(williamson(&singular), Err(Error::NearSingular(_))));
        assert!(williamson(&DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn unphysical_state_rejected() {
        let err = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.3).unwrap_err();
        assert!(matches!(err, Error::Unphysical(_)));
    }

    #[test]
    fn displacement_moves_only_the_mean() {
        let ns = 4.0f64;
        let d = DVector::from_row_slice(&[(2.0 * ns).sqrt(), 0.0]);
        let out = apply_unitary(&GaussianState::vacuum(1), &GaussianUnitary::displacement(d)).unwrap();
        assert_relative_eq!(out.mean()[0], 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(out.cov().clone(), DMatrix::identity(2, 2) * 0.5);
    }

    #[test]
    fn thermal_is_rotation_invariant() {
        let th = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 3.5).unwrap();
        let rot = GaussianUnitary::phase_rotation(0.77, 0, 1).unwrap();
        let out = apply_unitary(&th, &rot).unwrap();
        assert!(out.max_abs_diff(&th) < 1e-14);
    }

    #[test]
    fn beamsplitter_properties() {
        for kappa in [1e-6, 0.25, 0.5, 0.9, 1.0 - 1e-9] {
            let bs = GaussianUnitary::beamsplitter(kappa, 0, 1, 2).unwrap();
            assert!(bs.symplectic_defect() < 1e-12);
            assert_relative_eq!(bs.s.determinant(), 1.0, epsilon = 1e-12);
            let vac = GaussianState::vacuum(2);
            assert!(apply_unitary(&vac, &bs).unwrap().max_abs_diff(&vac) < 1e-15);
        }
        let near_one = GaussianUnitary::beamsplitter(1.0 - 1e-12, 0, 1, 2).unwrap();
        assert!((near_one.s - DMatrix::identity(4, 4)).amax() < 1e-5);
        assert!(GaussianUnitary::beamsplitter(0.0, 0, 1, 2).is_err());
        assert!(GaussianUnitary::beamsplitter(1.0, 0, 1, 2).is_err());
        assert!(GaussianUnitary::beamsplitter(0.5, 0, 0, 2).is_err());
        assert!(GaussianUnitary::beamsplitter(0.5, 0, 2, 2).is_err());
    }

    #[test]
    fn beamsplitter_scales_coherent_mean() {
        let alpha = 1.3f64;
        let coh = GaussianState::new(
            DVector::from_row_slice(&[2f64.sqrt() * alpha, 0.0]),
            DMatrix::identity(2, 2) * 0.5,
        )
        .unwrap();
        let pair = coh.tensor(&GaussianState::vacuum(1));
        let bs = GaussianUnitary::beamsplitter(0.25, 0, 1, 2).unwrap();
        let out = apply_unitary(&pair, &bs).unwrap();
        assert_relative_eq!(out.mean()[0], 0.5 * 2f64.sqrt() * alpha, epsilon = 1e-15);
        assert_relative_eq!(out.mean()[1], 0.0);
    }

    #[test]
    fn partial_trace_cases() {
        let th = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 2.5).unwrap();
        let prod = th.tensor(&GaussianState::vacuum(1));
        assert_eq!(partial_trace(&prod, &[0]).unwrap(), th);
        assert_eq!(partial_trace(&prod, &[1, 0]).unwrap(), prod);
        assert!(partial_trace(&prod, &[]).is_err());
        assert!(partial_trace(&prod, &[2]).is_err());
        assert!(partial_trace(&prod, &[0, 0]).is_err());
    }

    #[test]
    fn two_mode_squeezer_reduced_state_is_thermal() {
        let ns = 0.8f64;
        let r = ns.sqrt().asinh();
        let u = GaussianUnitary::two_mode_squeezer(r, 0, 1, 2).unwrap();
        assert!(u.symplectic_defect() < 1e-12);
        let tmss = apply_unitary(&GaussianState::vacuum(2), &u).unwrap();
        let q = partial_trace(&tmss, &[1]).unwrap();
        assert_relative_eq!(q.cov().clone(), DMatrix::identity(2, 2) * (ns + 0.5), epsilon = 1e-14);
    }

    #[test]
    fn s_inv_inverts() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 0.9]);
        let w = williamson(&cov).unwrap();
        let prod = &w.s * w.s_inv();
        assert_relative_eq!(prod, DMatrix::identity(2, 2), epsilon = 1e-13);
        let rebuilt = w.s_inv() * w.diagonal() * w.s_inv().transpose();
        assert_relative_eq!(rebuilt, cov, epsilon = 1e-13);
    }
}
