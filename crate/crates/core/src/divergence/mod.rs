//! Overlaps `Q_s`, Chernoff exponents and fidelities of Gaussian hypothesis pairs.

pub mod chernoff;
pub mod fidelity;
pub mod functions;
pub mod overlap;
pub mod standard_form;

pub use chernoff::{
    bhattacharyya_error_bound, chernoff, chernoff_opts, chernoff_with, ChernoffFlags,
    ChernoffResult,
};
pub use fidelity::fidelity;
pub use overlap::{
    ln_q_s_general, q_s_alt, q_s_coherent_closed, q_s_general, GaussianOverlap,
};
pub use standard_form::{
    bhattacharyya_deficit, bhattacharyya_exponent, ln_q_s_standard, q_s_standard,
};
