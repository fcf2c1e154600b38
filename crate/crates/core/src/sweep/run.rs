//! Grid evaluation.

use rayon::prelude::*;

use super::plan::{Quantity, SweepPlan};
use crate::divergence::{bhattacharyya_exponent, chernoff, fidelity, ChernoffResult};
use crate::error::Result;
use crate::target::{make_pair, TargetConfig, TargetModel};
use crate::transmitters::{TransmitterKind, TransmitterSpec};

/// One output record. `value` is NaN when the point could not be evaluated;
/// the reason is then in `flags`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub transmitter: TransmitterKind,
    pub model: TargetModel,
    pub n_s: f64,
    pub n_b: f64,
    pub kappa: f64,
    pub quantity: Quantity,
    pub value: f64,
    pub s_star: Option<f64>,
    pub flags: Vec<String>,
}

/// A single grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub kind: TransmitterKind,
    pub n_s: f64,
    pub n_b: f64,
    pub kappa: f64,
    pub model: TargetModel,
}

impl Point {
    fn spec(&self) -> Result<TransmitterSpec> {
        TransmitterSpec::new(self.kind, self.n_s)
    }

    fn config(&self) -> Result<TargetConfig> {
        TargetConfig::new(self.kappa, self.n_b, self.model)
    }

    fn with_kind(&self, kind: TransmitterKind) -> Point {
        let n_s = if kind == TransmitterKind::Vacuum { 0.0 } else { self.n_s };
        Point { kind, n_s, ..*self }
    }

    pub fn chernoff(&self) -> Result<ChernoffResult> {
        chernoff(&make_pair(&self.spec()?, &self.config()?)?)
    }

    pub fn fidelity(&self) -> Result<f64> {
        let pair = make_pair(&self.spec()?, &self.config()?)?;
        fidelity(&pair.rho0, &pair.rho1)
    }

    fn row(&self, quantity: Quantity, value: f64, s_star: Option<f64>, flags: Vec<String>) -> Row {
        Row {
            transmitter: self.kind,
            model: self.model,
            n_s: self.n_s,
            n_b: self.n_b,
            kappa: self.kappa,
            quantity,
            value,
            s_star,
            flags,
        }
    }

    /// Evaluates the requested quantities, sharing the Chernoff minimizations.
    pub fn evaluate(&self, quantities: &[Quantity]) -> Vec<Row> {
        let own = std::cell::OnceCell::new();
        let coherent = std::cell::OnceCell::new();
        let vacuum = std::cell::OnceCell::new();
        let own = || own.get_or_init(|| self.chernoff());
        let coherent = || coherent.get_or_init(|| self.with_kind(TransmitterKind::Coherent).chernoff());
        let vacuum = || vacuum.get_or_init(|| self.with_kind(TransmitterKind::Vacuum).chernoff());

        quantities
            .iter()
            .map(|&q| {
                let out: Result<(f64, Option<f64>, Vec<String>)> = (|| match q {
                    Quantity::QHalf => {
                        let r = own().clone()?;
                        Ok((r.q_half, None, labels(&r, "")))
                    }
                    Quantity::Chernoff => {
                        let r = own().clone()?;
                        Ok((r.xi, Some(r.s_star), labels(&r, "")))
                    }
                    Quantity::SStar => {
                        let r = own().clone()?;
                        Ok((r.s_star, Some(r.s_star), labels(&r, "")))
                    }
                    Quantity::RatioVsCoherent => {
                        let (r, c) = (own().clone()?, coherent().clone()?);
                        let mut flags = labels(&r, "");
                        flags.extend(labels(&c, "reference_"));
                        Ok((r.xi / c.xi, Some(r.s_star), flags))
                    }
                    Quantity::RatioVsVacuum => {
                        let (r, v) = (own().clone()?, vacuum().clone()?);
                        let mut flags = labels(&r, "");
                        flags.extend(labels(&v, "reference_"));
                        Ok((r.q_star / v.q_star, Some(r.s_star), flags))
                    }
                    Quantity::Fidelity => Ok((self.fidelity()?, None, vec![])),
                    Quantity::BhattacharyyaRatio => {
                        let cfg = self.config()?;
                        let e = bhattacharyya_exponent(&self.spec()?, &cfg)?;
                        let c = bhattacharyya_exponent(
                            &self.with_kind(TransmitterKind::Coherent).spec()?,
                            &cfg,
                        )?;
                        Ok((e / c, Some(0.5), vec![]))
                    }
                })();
                match out {
                    Ok((value, s_star, flags)) => self.row(q, value, s_star, flags),
                    Err(e) => self.row(q, f64::NAN, None, vec![format!("error: {e}")]),
                }
            })
            .collect()
    }
}

fn labels(r: &ChernoffResult, prefix: &str) -> Vec<String> {
    r.flags.labels().into_iter().map(|l| format!("{prefix}{l}")).collect()
}

/// Grid points in output order: transmitter, then `N_S`, `N_B`, `κ`.
/// A vacuum transmitter ignores the `N_S` grid and appears once with `N_S = 0`.
pub fn plan_points(plan: &SweepPlan) -> Vec<Point> {
    let (ns, nb, ks) = (plan.n_s.values(), plan.n_b.values(), plan.kappa.values());
    let mut points = Vec::new();
    for &kind in &plan.transmitters {
        let signals: &[f64] = if kind == TransmitterKind::Vacuum { &[0.0] } else { &ns };
        for &n_s in signals {
            for &n_b in &nb {
                for &kappa in &ks {
                    points.push(Point {
                        kind,
                        n_s,
                        n_b,
                        kappa,
                        model: plan.model,
                    });
                }
            }
        }
    }
    points
}

/// One row per grid point and quantity, in [`plan_points`] order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<Row>> {
    run_sweep_with(plan, true)
}

pub fn run_sweep_with(plan: &SweepPlan, parallel: bool) -> Result<Vec<Row>> {
    plan.validate()?;
    let points = plan_points(plan);
    let eval = |p: &Point| p.evaluate(&plan.quantities);
    let nested: Vec<Vec<Row>> = if parallel {
        points.par_iter().map(eval).collect()
    } else {
        points.iter().map(eval).collect()
    };
    Ok(nested.into_iter().flatten().collect())
}
