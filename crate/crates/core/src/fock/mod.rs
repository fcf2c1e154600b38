//! Brute-force oracle in a truncated number basis.
//!
//! Builds the hypothesis states from state vectors and a matrix-exponential
//! beamsplitter, then evaluates `tr ρ^s σ^{1−s}` and fidelities from dense
//! eigendecompositions. Nothing here touches the phase-space code.

mod channel;
mod cutoff;
mod measures;
mod states;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub use channel::{apply_target_fock, beamsplitter_block, beamsplitter_unitary};
pub use cutoff::{choose_cutoff, choose_cutoff_with, fock_pair, CutoffOptions};
pub use measures::{
    fidelity_fock, mean_photon_number, q_s_fock, q_s_fock_many, quadrature_moments,
    QuadratureMoments,
};
pub use states::{build_state, build_state_with_budget, fock_number_state, thermal_fock};

pub type Complex64 = Complex<f64>;

/// Largest trace deficit accepted by the constructors.
pub const TRUNCATION_BUDGET: f64 = 1e-8;

/// Per-mode cutoff ceiling for single-mode problems.
pub const SINGLE_MODE_CEILING: usize = 128;

/// Per-mode cutoff ceiling when a memory mode is present.
pub const MULTI_MODE_CEILING: usize = 24;

/// Hermitian operator on `n_modes` modes, each truncated to `cutoff` levels.
/// Basis index `Σ_k n_k D^{n−1−k}`: mode 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    n_modes: usize,
    cutoff: usize,
    matrix: DMatrix<Complex64>,
    trace_deficit: f64,
}

impl FockOperator {
    pub fn new(n_modes: usize, cutoff: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        if n_modes == 0 || cutoff < 2 {
            return Err(Error::InvalidModes(format!(
                "need at least one mode and cutoff ≥ 2, got {n_modes} modes, cutoff {cutoff}"
            )));
        }
        let dim = cutoff
            .checked_pow(n_modes as u32)
            .ok_or_else(|| Error::InvalidModes("dimension overflows".into()))?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let dev = hermitian_defect(&matrix);
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        let trace_deficit = 1.0 - matrix.trace().re;
        Ok(FockOperator {
            n_modes,
            cutoff,
            matrix,
            trace_deficit,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `1 − tr ρ`.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    /// `self ⊗ other`; both must share the cutoff.
    pub fn tensor(&self, other: &FockOperator) -> Result<FockOperator> {
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch {
                expected: self.cutoff,
                found: other.cutoff,
            });
        }
        FockOperator::new(
            self.n_modes + other.n_modes,
            self.cutoff,
            self.matrix.kronecker(&other.matrix),
        )
    }

    /// Traces out mode 0.
    pub fn trace_out_first(&self) -> Result<FockOperator> {
        if self.n_modes < 2 {
            return Err(Error::InvalidModes("cannot trace out the only mode".into()));
        }
        let d = self.cutoff;
        let rest = self.dim() / d;
        let m = DMatrix::from_fn(rest, rest, |i, j| {
            (0..d).map(|t| self.matrix[(t * rest + i, t * rest + j)]).sum()
        });
        FockOperator::new(self.n_modes - 1, d, m)
    }
}

pub(crate) fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}
