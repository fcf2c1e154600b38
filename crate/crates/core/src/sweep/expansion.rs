//! Residual-order checks of the asymptotic expansions.
//!
//! Each check evaluates an exact quantity and its expansion along a
//! log-spaced sequence of a small parameter `t`, fits the slope of
//! `ln |residual|` against `ln t` and passes when the slope reaches the
//! claimed order minus 0.1.

use std::fmt;
use std::str::FromStr;

use crate::divergence::functions::lambda;
use crate::divergence::{bhattacharyya_deficit, bhattacharyya_exponent};
use crate::error::{Error, Result};
use crate::target::{make_pair, TargetConfig};
use crate::transmitters::TransmitterSpec;

/// Allowed shortfall of the fitted order.
pub const ORDER_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckName {
    /// `Λ_s + Λ_{1−s}` for a bright background, small parameter `1/N_B`.
    LambdaSumBright,
    /// Coherent Bhattacharyya exponent for a bright background.
    CoherentBright,
    /// `Λ_s + Λ_{1−s}` for a dim background, small parameter `N_B`.
    LambdaSumDim,
    /// Coherent Bhattacharyya exponent for a dim background.
    CoherentDim,
    /// Squeezed-vacuum `1 − Q_{1/2}` with `2N_S ≪ N_B`.
    SqueezedWeak,
    /// Squeezed-vacuum `1 − Q_{1/2}` with `N_B < N_S`.
    SqueezedStrong,
    /// First-order symplectic eigenvalues of the reflected TMSS state.
    TmssEigenvalues,
    /// TMSS `1 − Q_{1/2}` to second order in `κ`.
    TmssAffinity,
    /// TMSS/coherent exponent ratio along the two orders of limits.
    LimitOrder,
}

impl CheckName {
    pub const ALL: [CheckName; 9] = [
        CheckName::LambdaSumBright,
        CheckName::CoherentBright,
        CheckName::LambdaSumDim,
        CheckName::CoherentDim,
        CheckName::SqueezedWeak,
        CheckName::SqueezedStrong,
        CheckName::TmssEigenvalues,
        CheckName::TmssAffinity,
        CheckName::LimitOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::LambdaSumBright => "lambda-sum-bright",
            CheckName::CoherentBright => "coherent-bright",
            CheckName::LambdaSumDim => "lambda-sum-dim",
            CheckName::CoherentDim => "coherent-dim",
            CheckName::SqueezedWeak => "squeezed-weak",
            CheckName::SqueezedStrong => "squeezed-strong",
            CheckName::TmssEigenvalues => "tmss-eigenvalues",
            CheckName::TmssAffinity => "tmss-affinity",
            CheckName::LimitOrder => "limit-order",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        CheckName::ALL
            .into_iter()
            .find(|c| c.name() == t)
            .ok_or_else(|| Error::Plan(format!("unknown check '{t}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub t: f64,
    pub exact: f64,
    pub expansion: f64,
    pub residual: f64,
}

/// One parameter path of a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// What `t` stands for, e.g. `kappa` or `1/n_b`.
    pub parameter: &'static str,
    pub sequence: Vec<f64>,
    pub stated_order: f64,
    pub points: Vec<ResidualPoint>,
    pub fitted_order: f64,
    pub pass: bool,
    /// Set when an evaluation failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCheck {
    pub name: CheckName,
    pub series: Vec<Series>,
    pub pass: bool,
}

fn series(label: impl Into<String>, parameter: &'static str, sequence: Vec<f64>, order: f64) -> Series {
    Series {
        label: label.into(),
        parameter,
        sequence,
        stated_order: order,
        points: vec![],
        fitted_order: f64::NAN,
        pass: false,
        error: None,
    }
}

fn decades(from: i32, n: i32) -> Vec<f64> {
    (0..n).map(|i| 10f64.powi(from - i)).collect()
}

impl ExpansionCheck {
    /// The parameter paths of `name`, not yet evaluated.
    pub fn new(name: CheckName) -> Self {
        use CheckName::*;
        let s_values = [0.3, 0.5, 0.7];
        let series = match name {
            LambdaSumBright => s_values
                .iter()
                .map(|s| series(format!("s={s}"), "1/n_b", vec![1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0], 1.0))
                .collect(),
            LambdaSumDim => s_values
                .iter()
                .map(|s| series(format!("s={s}"), "n_b", decades(-2, 4), 1.0))
                .collect(),
            CoherentBright => vec![series("n_b=100,n_s=1", "kappa", decades(-2, 4), 1.0)],
            CoherentDim => vec![series("n_b=1e-4,n_s=1", "kappa", decades(-2, 4), 1.0)],
            SqueezedWeak => vec![series("n_b=1000,n_s=1", "kappa", decades(-2, 4), 2.0)],
            SqueezedStrong => vec![series("n_b=100,n_s=1000", "kappa", decades(-5, 4), 2.0)],
            TmssEigenvalues => vec![
                series("gamma1,n_b=5,n_s=2", "kappa", decades(-2, 4), 2.0),
                series("gamma2,n_b=5,n_s=2", "kappa", decades(-2, 4), 2.0),
            ],
            TmssAffinity => vec![series("n_b=100,n_s=0.01", "kappa", decades(-2, 4), 1.0)],
            LimitOrder => vec![
                series("kappa-first,n_b=1e4", "n_s", decades(-2, 4), 0.5),
                series("ns-first,n_b=1e4", "kappa", decades(-1, 4), 2.0),
            ],
        };
        ExpansionCheck {
            name,
            series,
            pass: false,
        }
    }
}

/// Slope of the least-squares line through `(ln x, ln |y|)`.
pub fn fit_order(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn lambda_sum(s: f64, n_b: f64, kappa: f64) -> f64 {
    lambda(s, 2.0 * n_b + 1.0) + lambda(1.0 - s, 2.0 * (1.0 - kappa) * n_b + 1.0)
}

fn parse_s(label: &str) -> f64 {
    label
        .strip_prefix("s=")
        .and_then(|v| v.parse().ok())
        .unwrap_or(0.5)
}

/// TMSS over coherent Bhattacharyya exponent, agnostic model.
fn exponent_ratio(n_s: f64, kappa: f64, n_b: f64) -> Result<f64> {
    let cfg = TargetConfig::agnostic(kappa, n_b)?;
    Ok(bhattacharyya_exponent(&TransmitterSpec::tmss(n_s)?, &cfg)?
        / bhattacharyya_exponent(&TransmitterSpec::coherent(n_s)?, &cfg)?)
}

/// Symplectic eigenvalues (doubled) of the reflected TMSS state, ordered as
/// (background-like, memory-like).
fn tmss_gammas(n_s: f64, n_b: f64, kappa: f64) -> Result<(f64, f64)> {
    let pair = make_pair(&TransmitterSpec::tmss(n_s)?, &TargetConfig::agnostic(kappa, n_b)?)?;
    let nu = pair.rho1.williamson()?.nu;
    let (a, b) = (2.0 * nu[0], 2.0 * nu[1]);
    let g1 = 2.0 * n_b + 1.0;
    Ok(if (a - g1).abs() <= (b - g1).abs() { (a, b) } else { (b, a) })
}

fn point(check: CheckName, label: &str, t: f64) -> Result<(f64, f64)> {
    use CheckName::*;
    Ok(match check {
        LambdaSumBright => {
            let (s, n_b, k) = (parse_s(label), 1.0 / t, 1e-3);
            (lambda_sum(s, n_b, k), (2.0 * n_b * (1.0 - k * s) + 1.0) / (s * (1.0 - s)))
        }
        LambdaSumDim => {
            let (s, n_b, k) = (parse_s(label), t, 1e-3);
            (lambda_sum(s, n_b, k), 2.0 + 2.0 * (n_b.powf(s) + n_b.powf(1.0 - s)))
        }
        CoherentBright => {
            let (n_b, n_s, k) = (100.0, 1.0, t);
            let cfg = TargetConfig::agnostic(k, n_b)?;
            (
                bhattacharyya_exponent(&TransmitterSpec::coherent(n_s)?, &cfg)?,
                k * k * (n_b - 1.0) / (8.0 * n_b) + k * n_s / (2.0 * ((2.0 - k) * n_b + 1.0)),
            )
        }
        CoherentDim => {
            let (n_b, n_s, k) = (1e-4, 1.0, t);
            let cfg = TargetConfig::agnostic(k, n_b)?;
            (
                bhattacharyya_exponent(&TransmitterSpec::coherent(n_s)?, &cfg)?,
                n_b * k * k / 8.0 + k * n_s / (1.0 + 2.0 * n_b.sqrt()),
            )
        }
        SqueezedWeak => {
            let (n_b, n_s, k) = (1000.0, 1.0, t);
            let cfg = TargetConfig::agnostic(k, n_b)?;
            (
                bhattacharyya_deficit(&TransmitterSpec::smsv(n_s)?, &cfg)?,
                k * k * (n_b - 1.0 - 2.0 * n_s) / (8.0 * n_b),
            )
        }
        SqueezedStrong => {
            let (n_b, n_s, k) = (100.0, 1000.0, t);
            let cfg = TargetConfig::agnostic(k, n_b)?;
            (
                bhattacharyya_deficit(&TransmitterSpec::smsv(n_s)?, &cfg)?,
                k * k * (n_b - 1.0) / (8.0 * n_b) + k * k * n_s * (n_s - n_b) / (4.0 * n_b * n_b),
            )
        }
        TmssEigenvalues => {
            let (n_b, n_s, k) = (5.0, 2.0, t);
            let (g1, g2) = tmss_gammas(n_s, n_b, k)?;
            let d = 1.0 + n_s + n_b;
            if label.starts_with("gamma1") {
                (g1, 1.0 + 2.0 * n_b - 2.0 * n_b * (1.0 + n_b) * k / d)
            } else {
                (g2, 1.0 + 2.0 * n_s - 2.0 * n_s * (1.0 + n_s) * k / d)
            }
        }
        TmssAffinity => {
            let (n_b, n_s, k): (f64, f64, f64) = (100.0, 0.01, t);
            let cfg = TargetConfig::agnostic(k, n_b)?;
            let lin = n_s - 2.0 * n_s.powf(1.5) + 3.0 * n_s * n_s;
            let quad = 1.25 * n_s - 3.0 * n_s.powf(1.5) + 9.0 * n_s * n_s;
            (
                bhattacharyya_deficit(&TransmitterSpec::tmss(n_s)?, &cfg)?,
                lin * k / n_b + (n_b - 1.0) * k * k / (8.0 * n_b) + quad * k * k / n_b,
            )
        }
        LimitOrder => {
            let n_b = 1e4;
            if label.starts_with("kappa-first") {
                // κ = N_S²/N_B keeps the vacuum term below the signal term
                (exponent_ratio(t, t * t / n_b, n_b)?, 4.0)
            } else {
                (exponent_ratio(t.powi(3), t, n_b)?, 1.0)
            }
        }
    })
}

/// Evaluates every series of `check` and sets the pass flags.
pub fn verify_expansion(mut check: ExpansionCheck) -> ExpansionCheck {
    for s in &mut check.series {
        let evaluated: Result<Vec<ResidualPoint>> = s
            .sequence
            .iter()
            .map(|&t| {
                let (exact, expansion) = point(check.name, &s.label, t)?;
                Ok(ResidualPoint {
                    t,
                    exact,
                    expansion,
                    residual: exact - expansion,
                })
            })
            .collect();
        match evaluated {
            Ok(points) => {
                let ts: Vec<f64> = points.iter().map(|p| p.t).collect();
                let rs: Vec<f64> = points.iter().map(|p| p.residual).collect();
                s.fitted_order = fit_order(&ts, &rs);
                s.pass = s.fitted_order.is_finite() && s.fitted_order >= s.stated_order - ORDER_SLACK;
                s.points = points;
            }
            Err(e) => {
                s.error = Some(e.to_string());
                s.pass = false;
            }
        }
    }
    check.pass = check.series.iter().all(|s| s.pass);
    check
}

pub fn verify(name: CheckName) -> ExpansionCheck {
    verify_expansion(ExpansionCheck::new(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_power() {
        let xs = [1e-1, 1e-2, 1e-3];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| -3.0 * x.powf(1.7)).collect();
        assert!((fit_order(&xs, &ys) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.name().parse::<CheckName>().unwrap(), c);
        }
    }

    #[test]
    fn claimed_orders_hold() {
        for c in CheckName::ALL {
            if c == CheckName::LambdaSumDim {
                continue;
            }
            let r = verify(c);
            for s in &r.series {
                assert!(s.pass, "{c} {}: fitted {}", s.label, s.fitted_order);
            }
            assert!(r.pass);
        }
    }

    #[test]
    fn dim_lambda_sum_order_depends_on_s() {
        // the 2 N_B^{2s} term outgrows O(N_B) away from s = 1/2
        let r = verify(CheckName::LambdaSumDim);
        assert!(!r.pass);
        for s in &r.series {
            if s.label == "s=0.5" {
                assert!(s.pass && (s.fitted_order - 1.0).abs() < 0.05);
            } else {
                assert!(!s.pass && (s.fitted_order - 0.64).abs() < 0.02, "{}", s.fitted_order);
            }
        }
    }

    #[test]
    fn limit_paths_approach_their_limits() {
        let r = verify(CheckName::LimitOrder);
        let last = |i: usize| r.series[i].points.last().unwrap().exact;
        assert!(last(0) > 3.97 && last(0) < 4.0);
        assert!((last(1) - 1.0).abs() < 1e-10);
    }
}
