//! The scalar functions `G_p(x)` and `Λ_p(x)` of the doubled-convention
//! overlap formula, for `x ≥ 1` and `0 < p ≤ 1`:
//!
//! `G_p(x) = 2^p / ((x+1)^p − (x−1)^p)`,
//! `Λ_p(x) = ((x+1)^p + (x−1)^p) / ((x+1)^p − (x−1)^p)`.

use num_traits::Float;
use twofloat::TwoFloat;

/// Below this distance from 1 the argument is treated as a pure state.
pub const PURE_SNAP: f64 = 1e-10;

/// `(ln G_p(x), Λ_p(x))`.
///
/// The difference `(x+1)^p − (x−1)^p` is evaluated as
/// `w^p · expm1(p · ln_1p(2/w))` with `w = x − 1`, which keeps full relative
/// precision both for `x → ∞` and close to a pure state. `w < PURE_SNAP`
/// is replaced by the exact `0^p = 0` branch.
pub fn ln_g_lambda(p: f64, x: f64) -> (f64, f64) {
    ln_g_lambda_excess(p, x - 1.0)
}

/// Same as [`ln_g_lambda`] with the argument given as `w = x − 1`, for callers
/// that know the distance from a pure state more accurately than `x` itself.
pub fn ln_g_lambda_excess(p: f64, w: f64) -> (f64, f64) {
    debug_assert!(p > 0.0 && p <= 1.0 && w >= -PURE_SNAP);
    if w < PURE_SNAP {
        return (0.0, 1.0);
    }
    let e = (p * (2.0 / w).ln_1p()).exp_m1();
    let ln_diff = p * w.ln() + e.ln();
    (p * std::f64::consts::LN_2 - ln_diff, 1.0 + 2.0 / e)
}

pub fn g(p: f64, x: f64) -> f64 {
    ln_g_lambda(p, x).0.exp()
}

pub fn lambda(p: f64, x: f64) -> f64 {
    ln_g_lambda(p, x).1
}

/// Float types that can evaluate `G_p` and `Λ_p`; the argument is `w = x − 1`.
pub trait Kernel: Float {
    fn g_lambda(p: Self, w: Self) -> (Self, Self);

    /// Division at the full precision of the type.
    fn quotient(a: Self, b: Self) -> Self {
        a / b
    }
}

impl Kernel for f64 {
    fn g_lambda(p: f64, w: f64) -> (f64, f64) {
        let (lg, l) = ln_g_lambda_excess(p, w);
        (lg.exp(), l)
    }
}

impl Kernel for TwoFloat {
    /// Exact to double-double precision at `p = 1/2`, where only square
    /// roots are needed. Other exponents go through the f64 kernel.
    fn g_lambda(p: TwoFloat, w: TwoFloat) -> (TwoFloat, TwoFloat) {
        if p == TwoFloat::from(0.5) {
            let one = TwoFloat::from(1.0);
            if w < TwoFloat::from(PURE_SNAP) {
                return (one, one);
            }
            let x = w + one;
            let up = (x + one).sqrt();
            let down = w.sqrt();
            // G = (√(x+1) + √(x−1))/√2, Λ = x + √(x²−1)
            let g = (up + down) * TwoFloat::from(0.5).sqrt();
            (g, x + up * down)
        } else {
            let (g, l) = f64::g_lambda(p.hi(), w.hi());
            (TwoFloat::from(g), TwoFloat::from(l))
        }
    }

    /// twofloat's own `TwoFloat / TwoFloat` forms the reciprocal residual
    /// without an FMA and is only double accurate; one correction step
    /// `q + (a − q b)/b` restores double-double precision.
    fn quotient(a: TwoFloat, b: TwoFloat) -> TwoFloat {
        let q = a / b;
        q + (a - q * b) / b.hi()
    }
}
