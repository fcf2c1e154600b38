//! Bounded scalar minimization on `(0, 1)` for convex objectives.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::brent::BrentOpt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Absolute tolerance on the minimizer.
    pub x_tol: f64,
    pub max_iter: u64,
    /// A coarse scan whose spread is below this is reported as flat.
    pub flat_tol: f64,
    pub scan_points: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            x_tol: 1e-7,
            max_iter: 200,
            flat_tol: 1e-13,
            scan_points: 11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub iterations: u64,
    pub converged: bool,
    /// Spread of the coarse scan was below `flat_tol`; `x` is then 1/2.
    pub flat: bool,
}

/// Endpoints kept away from 0 and 1, where the overlap is not defined.
pub const EDGE: f64 = 1e-12;

struct Objective<'a, F> {
    f: &'a F,
}

impl<F: Fn(f64) -> Result<f64>> CostFunction for Objective<'_, F> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, argmin::core::Error> {
        (self.f)(x.clamp(EDGE, 1.0 - EDGE)).map_err(argmin::core::Error::from)
    }
}

/// Minimizes `f` on `(0, 1)` with Brent's method after a coarse flatness scan.
pub fn minimize_unit_interval<F>(f: F, opts: &MinimizeOptions) -> Result<Minimum>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = opts.scan_points.max(3);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let x = 0.02 + 0.96 * i as f64 / (n - 1) as f64;
        let v = f(x)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi - lo < opts.flat_tol {
        return Ok(Minimum {
            x: 0.5,
            fx: f(0.5)?,
            iterations: 0,
            converged: true,
            flat: true,
        });
    }

    // Brent's stopping rule is |x − m| ≤ 2·tol − (b − a)/2 with tol = eps·|x| + t
    let solver = BrentOpt::new(EDGE, 1.0 - EDGE).set_tolerance(1e-12, opts.x_tol / 2.0);
    let res = Executor::new(Objective { f: &f }, solver)
        .configure(|st| st.max_iters(opts.max_iter))
        .run()
        .map_err(|e| match e.downcast::<Error>() {
            Ok(inner) => inner,
            Err(other) => Error::Numerical(other.to_string()),
        })?;
    let st = res.state();
    let x = st
        .get_best_param()
        .copied()
        .ok_or_else(|| Error::Numerical("minimizer returned no point".into()))?
        .clamp(EDGE, 1.0 - EDGE);
    let converged = matches!(
        st.get_termination_status(),
        TerminationStatus::Terminated(TerminationReason::SolverConverged)
    );
    Ok(Minimum {
        x,
        fx: st.get_best_cost(),
        iterations: st.get_iter(),
        converged,
        flat: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn finds_quadratic_minimum() {
        let m = minimize_unit_interval(|x| Ok((x - 0.3141).powi(2)), &MinimizeOptions::default())
            .unwrap();
        assert!(m.converged && !m.flat);
        assert!((m.x - 0.3141).abs() < 1e-7);
    }

    #[test]
    fn flat_objective_is_flagged() {
        let m = minimize_unit_interval(|x| Ok(1e-15 * x), &MinimizeOptions::default()).unwrap();
        assert!(m.flat);
        assert_eq!(m.x, 0.5);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let opts = MinimizeOptions {
            max_iter: 2,
            ..MinimizeOptions::default()
        };
        let m = minimize_unit_interval(|x| Ok((x - 0.7).powi(2)), &opts).unwrap();
        assert!(!m.converged);
    }

    #[test]
    fn objective_errors_propagate() {
        let r = minimize_unit_interval(
            |x| {
                if x > 0.6 {
                    Err(Error::Numerical("boom".into()))
                } else {
                    Ok(x)
                }
            },
            &MinimizeOptions::default(),
        );
        assert_eq!(r.unwrap_err(), Error::Numerical("boom".into()));
    }

    #[test]
    fn log_cosh_minimum() {
        let m = minimize_unit_interval(|x| Ok((8.0 * (x - 0.62)).cosh().ln()), &MinimizeOptions::default())
            .unwrap();
        assert_relative_eq!(m.x, 0.62, epsilon = 1e-7);
    }
}
