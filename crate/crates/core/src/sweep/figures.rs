//! Figure data sets, each with summary statistics checked against
//! reference values.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::plan::{Grid, Quantity};
use super::run::{Point, Row};
use crate::error::{Error, Result};
use crate::target::TargetModel;
use crate::transmitters::TransmitterKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Fidelity of reflected squeezed vacuum and of the vacuum probe with
    /// the background, against `N_S`.
    FidelityCurve,
    /// `Q_{s*}` of squeezed vacuum over that of the vacuum probe.
    SqueezedVsVacuum,
    /// Optimal `s` map for the coherent transmitter.
    OptimalSCoherent,
    /// Optimal `s` map for the TMSS transmitter.
    OptimalSTmss,
    /// `ξ_tmss / ξ_coherent` map.
    ExponentRatio,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::FidelityCurve,
        Figure::SqueezedVsVacuum,
        Figure::OptimalSCoherent,
        Figure::OptimalSTmss,
        Figure::ExponentRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::FidelityCurve => "fidelity-curve",
            Figure::SqueezedVsVacuum => "squeezed-vs-vacuum",
            Figure::OptimalSCoherent => "optimal-s-coherent",
            Figure::OptimalSTmss => "optimal-s-tmss",
            Figure::ExponentRatio => "exponent-ratio",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == t)
            .ok_or_else(|| Error::Plan(format!("unknown figure '{t}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryItem {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance target.
    pub target: String,
    pub pass: bool,
}

impl SummaryItem {
    fn new(name: &str, value: f64, target: impl Into<String>, pass: bool) -> Self {
        SummaryItem {
            name: name.to_string(),
            value,
            target: target.into(),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureReport {
    pub figure: Figure,
    pub rows: Vec<Row>,
    pub summary: Vec<SummaryItem>,
}

impl FigureReport {
    pub fn pass(&self) -> bool {
        self.summary.iter().all(|s| s.pass)
    }

    pub fn item(&self, name: &str) -> Option<&SummaryItem> {
        self.summary.iter().find(|s| s.name == name)
    }
}

pub const FIDELITY_KAPPA: f64 = 1e-4;
pub const FIDELITY_N_B: f64 = 20.0;
/// Marked peak of the approximate fidelity, `(2N_B − 3)/4`.
pub const FIDELITY_MARKER: f64 = 9.25;
pub const SQUEEZE_KAPPA: f64 = 1e-3;
pub const SQUEEZE_N_B: f64 = 200.0;
pub const MAP_KAPPA: f64 = 1e-2;

pub fn fidelity_grid() -> Grid {
    Grid::Lin { lo: 0.0, hi: 40.0, n: 401 }
}

pub fn squeeze_grid() -> Grid {
    Grid::Log { lo: 1e-2, hi: 1e4, n: 61 }
}

pub fn map_ns_grid() -> Grid {
    Grid::Log { lo: 1e-3, hi: 10.0, n: 41 }
}

pub fn map_nb_grid() -> Grid {
    Grid::Log { lo: 1e-3, hi: 100.0, n: 41 }
}

fn point(kind: TransmitterKind, n_s: f64, n_b: f64, kappa: f64) -> Point {
    Point {
        kind,
        n_s,
        n_b,
        kappa,
        model: TargetModel::Agnostic,
    }
}

fn eval_all(points: &[Point], q: Quantity) -> Vec<Row> {
    let nested: Vec<Vec<Row>> = points.par_iter().map(|p| p.evaluate(&[q])).collect();
    nested.into_iter().flatten().collect()
}

/// Indices where `mask` holds, and whether they form one unbroken run.
fn run_of(mask: &[bool]) -> (Vec<usize>, bool) {
    let idx: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    let contiguous = idx.windows(2).all(|w| w[1] == w[0] + 1);
    (idx, contiguous)
}

/// Vertex of the parabola through three equally spaced samples around `i`.
fn parabolic_peak(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= xs.len() {
        return xs[i];
    }
    let (a, b, c) = (ys[i - 1], ys[i], ys[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return xs[i];
    }
    xs[i] + 0.5 * (a - c) / denom * (xs[i + 1] - xs[i])
}

fn fidelity_curve() -> FigureReport {
    let ns = fidelity_grid().values();
    let pts: Vec<Point> = ns
        .iter()
        .map(|&n| point(TransmitterKind::Smsv, n, FIDELITY_N_B, FIDELITY_KAPPA))
        .collect();
    let mut rows = vec![];
    rows.extend(
        point(TransmitterKind::Vacuum, 0.0, FIDELITY_N_B, FIDELITY_KAPPA)
            .evaluate(&[Quantity::Fidelity]),
    );
    let vac = rows[0].value;
    let smsv = eval_all(&pts, Quantity::Fidelity);
    let f: Vec<f64> = smsv.iter().map(|r| r.value).collect();
    rows.extend(smsv);

    let imax = (0..f.len())
        .max_by(|&a, &b| f[a].total_cmp(&f[b]))
        .unwrap_or(0);
    let peak = parabolic_peak(&ns, &f, imax);
    let rel = (peak - FIDELITY_MARKER).abs() / FIDELITY_MARKER;
    let (above, contiguous) = run_of(&f.iter().map(|&x| x > vac).collect::<Vec<_>>());
    let ok = !above.is_empty() && contiguous;
    let lo = above.first().map(|&i| ns[i]).unwrap_or(f64::NAN);
    let hi = above.last().map(|&i| ns[i]).unwrap_or(f64::NAN);
    FigureReport {
        figure: Figure::FidelityCurve,
        rows,
        summary: vec![
            SummaryItem::new(
                "peak_n_s",
                peak,
                format!("within 5% of {FIDELITY_MARKER}"),
                rel <= 0.05,
            ),
            SummaryItem::new("peak_fidelity", f[imax], "reported", true),
            SummaryItem::new("vacuum_fidelity", vac, "reported", true),
            SummaryItem::new("above_vacuum_from", lo, "one contiguous N_S interval", ok),
            SummaryItem::new("above_vacuum_to", hi, "one contiguous N_S interval", ok),
        ],
    }
}

fn squeezed_vs_vacuum() -> FigureReport {
    let ns = squeeze_grid().values();
    let pts: Vec<Point> = ns
        .iter()
        .map(|&n| point(TransmitterKind::Smsv, n, SQUEEZE_N_B, SQUEEZE_KAPPA))
        .collect();
    let ratio = eval_all(&pts, Quantity::RatioVsVacuum);
    let q_half = eval_all(&pts, Quantity::QHalf);
    let fid = eval_all(&pts, Quantity::Fidelity);
    let vac = point(TransmitterKind::Vacuum, 0.0, SQUEEZE_N_B, SQUEEZE_KAPPA)
        .evaluate(&[Quantity::Fidelity]);
    let f_vac = vac[0].value;

    let r: Vec<f64> = ratio.iter().map(|r| r.value).collect();
    let (above, contiguous) = run_of(&r.iter().map(|&x| x > 1.0).collect::<Vec<_>>());
    let ok = !above.is_empty() && contiguous;
    let lo = above.first().map(|&i| ns[i]).unwrap_or(f64::NAN);
    let hi = above.last().map(|&i| ns[i]).unwrap_or(f64::NAN);
    let agree = above.iter().filter(|&&i| fid[i].value > f_vac).count();
    let frac = if above.is_empty() { f64::NAN } else { agree as f64 / above.len() as f64 };
    let max_ratio = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut rows = ratio;
    rows.extend(q_half);
    rows.extend(vac);
    rows.extend(fid);
    FigureReport {
        figure: Figure::SqueezedVsVacuum,
        rows,
        summary: vec![
            SummaryItem::new("ratio_above_one_from", lo, "one contiguous N_S region with ratio > 1", ok),
            SummaryItem::new("ratio_above_one_to", hi, "one contiguous N_S region with ratio > 1", ok),
            SummaryItem::new("max_ratio_minus_one", max_ratio - 1.0, "> 0", max_ratio > 1.0),
            SummaryItem::new(
                "fidelity_concomitant_fraction",
                frac,
                "1: squeezed fidelity above vacuum wherever ratio > 1",
                frac == 1.0,
            ),
        ],
    }
}

fn map_points(kind: TransmitterKind) -> Vec<Point> {
    let (ns, nb) = (map_ns_grid().values(), map_nb_grid().values());
    ns.iter()
        .flat_map(|&s| nb.iter().map(move |&b| point(kind, s, b, MAP_KAPPA)))
        .collect()
}

fn cell(rows: &[Row], n_s: f64, n_b: f64) -> f64 {
    rows.iter()
        .find(|r| r.n_s == n_s && r.n_b == n_b)
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
}

fn s_star_summary(rows: &[Row]) -> Vec<SummaryItem> {
    let v: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let clean = rows
        .iter()
        .all(|r| r.value.is_finite() && !r.flags.iter().any(|f| f.starts_with("error") || f == "unconverged"));
    vec![
        SummaryItem::new("min_s_star", lo, "in (0, 1)", lo > 0.0 && lo < 1.0),
        SummaryItem::new("max_s_star", hi, "in (0, 1)", hi > 0.0 && hi < 1.0),
        SummaryItem::new("all_cells_converged", clean as u8 as f64, "1", clean),
    ]
}

fn optimal_s(kind: TransmitterKind) -> FigureReport {
    let rows = eval_all(&map_points(kind), Quantity::SStar);
    let mut summary = s_star_summary(&rows);
    let figure = if kind == TransmitterKind::Coherent {
        let k = MAP_KAPPA;
        let bright = cell(&rows, 1.0, 100.0);
        let dim = cell(&rows, 1.0, 1e-3);
        let bright_pred = 0.5 + k * 100.0 / (4.0 * 201.0);
        let dim_pred = 0.5 + k / 24.0;
        summary.push(SummaryItem::new(
            "s_star_n_b_100",
            bright,
            format!("{bright_pred:.6} ± 5e-4"),
            (bright - bright_pred).abs() < 5e-4,
        ));
        summary.push(SummaryItem::new(
            "s_star_n_b_1e-3",
            dim,
            format!("{dim_pred:.6} ± 5e-4"),
            (dim - dim_pred).abs() < 5e-4,
        ));
        Figure::OptimalSCoherent
    } else {
        Figure::OptimalSTmss
    };
    FigureReport {
        figure,
        rows,
        summary,
    }
}

fn exponent_ratio() -> FigureReport {
    let rows = eval_all(&map_points(TransmitterKind::Tmss), Quantity::RatioVsCoherent);
    let (imax, max) = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.value))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let all_below = rows.iter().all(|r| r.value < 4.0);
    let finite = rows.iter().all(|r| r.value.is_finite());
    let (at_ns, at_nb) = (rows[imax].n_s, rows[imax].n_b);
    FigureReport {
        figure: Figure::ExponentRatio,
        summary: vec![
            SummaryItem::new("max_ratio", max, "in [2.1, 2.4] (reference 2.23)", (2.1..=2.4).contains(&max)),
            SummaryItem::new("max_ratio_db", 10.0 * max.log10(), "reference 3.48 dB", (2.1..=2.4).contains(&max)),
            SummaryItem::new("max_at_n_s", at_ns, "reported", true),
            SummaryItem::new("max_at_n_b", at_nb, "reported", true),
            SummaryItem::new("all_cells_below_4", all_below as u8 as f64, "1", all_below && finite),
        ],
        rows,
    }
}

pub fn reproduce_figure(which: Figure) -> FigureReport {
    match which {
        Figure::FidelityCurve => fidelity_curve(),
        Figure::SqueezedVsVacuum => squeezed_vs_vacuum(),
        Figure::OptimalSCoherent => optimal_s(TransmitterKind::Coherent),
        Figure::OptimalSTmss => optimal_s(TransmitterKind::Tmss),
        Figure::ExponentRatio => exponent_ratio(),
    }
}
