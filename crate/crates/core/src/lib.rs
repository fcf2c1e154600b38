//! Chernoff exponents for Gaussian target detection in a thermal background,
//! with a truncated number-basis oracle.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divergence;
pub mod error;
pub mod fock;
pub mod minimize;
pub mod sweep;
pub mod symplectic;
pub mod target;
pub mod transmitters;
