//! Number-basis probe and background states.

use nalgebra::{DMatrix, DVector};

use super::{Complex64, FockOperator, TRUNCATION_BUDGET};
use crate::error::{check_param, Error, Result};
use crate::transmitters::{TransmitterKind, TransmitterSpec};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pure(n_modes: usize, cutoff: usize, psi: &DVector<f64>) -> Result<FockOperator> {
    let v = psi.map(c);
    FockOperator::new(n_modes, cutoff, &v * v.adjoint())
}

/// Geometric distribution `N^n/(N+1)^{n+1}` on `cutoff` levels, not renormalized.
pub fn thermal_fock(n: f64, cutoff: usize) -> Result<FockOperator> {
    check_param("n", n, n >= 0.0, "must be non-negative")?;
    let ratio = n / (n + 1.0);
    let diag = DVector::from_fn(cutoff, |k, _| c(ratio.powi(k as i32) / (n + 1.0)));
    FockOperator::new(1, cutoff, DMatrix::from_diagonal(&diag))
}

/// `|n⟩⟨n|`.
pub fn fock_number_state(n: usize, cutoff: usize) -> Result<FockOperator> {
    if n >= cutoff {
        return Err(Error::InvalidModes(format!("level {n} outside cutoff {cutoff}")));
    }
    let mut psi = DVector::zeros(cutoff);
    psi[n] = 1.0;
    pure(1, cutoff, &psi)
}

pub fn build_state(spec: &TransmitterSpec, cutoff: usize) -> Result<FockOperator> {
    build_state_with_budget(spec, cutoff, TRUNCATION_BUDGET)
}

/// Truncated probe state; the lost weight is reported as the trace deficit
/// and must not exceed `budget`.
pub fn build_state_with_budget(
    spec: &TransmitterSpec,
    cutoff: usize,
    budget: f64,
) -> Result<FockOperator> {
    let spec = TransmitterSpec::new(spec.kind, spec.n_signal)?;
    if cutoff < 2 {
        return Err(Error::InvalidModes(format!("cutoff {cutoff} < 2")));
    }
    let ns = spec.n_signal;
    let op = match spec.kind {
        TransmitterKind::Vacuum => fock_number_state(0, cutoff)?,
        TransmitterKind::Coherent => {
            let alpha = ns.sqrt();
            let mut psi = DVector::zeros(cutoff);
            psi[0] = (-ns / 2.0).exp();
            for n in 1..cutoff {
                psi[n] = psi[n - 1] * alpha / (n as f64).sqrt();
            }
            pure(1, cutoff, &psi)?
        }
        TransmitterKind::Smsv => {
            // S(r)|0⟩ with q squeezed: c_{2n} = (−tanh r)^n √((2n)!)/(2^n n!) / √cosh r
            let tanh = (ns / (ns + 1.0)).sqrt();
            let mut psi = DVector::zeros(cutoff);
            psi[0] = (ns + 1.0).sqrt().recip().sqrt();
            let mut n = 2;
            while n < cutoff {
                let m = n as f64;
                psi[n] = -psi[n - 2] * tanh * ((m - 1.0) / m).sqrt();
                n += 2;
            }
            pure(1, cutoff, &psi)?
        }
        TransmitterKind::Tmss => {
            let ratio = (ns / (ns + 1.0)).sqrt();
            let mut psi = DVector::zeros(cutoff * cutoff);
            let mut amp = (ns + 1.0).sqrt().recip();
            for n in 0..cutoff {
                psi[n * cutoff + n] = amp;
                amp *= ratio;
            }
            pure(2, cutoff, &psi)?
        }
    };
    if op.trace_deficit() > budget {
        return Err(Error::TruncationBudget {
            deficit: op.trace_deficit(),
            budget,
        });
    }
    Ok(op)
}
