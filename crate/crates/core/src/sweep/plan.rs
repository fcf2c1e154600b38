//! Sweep plans and their flat `key = value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::target::TargetModel;
use crate::transmitters::TransmitterKind;

/// Values of one swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    /// `n` points with equally spaced decimal exponents, endpoints included.
    Log { lo: f64, hi: f64, n: usize },
    Lin { lo: f64, hi: f64, n: usize },
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Grid::List(vec![x])
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Log { lo, hi, n } => {
                let (a, b) = (lo.log10(), hi.log10());
                spaced(n, |t| 10f64.powf(a + (b - a) * t), lo, hi)
            }
            Grid::Lin { lo, hi, n } => spaced(n, |t| lo + (hi - lo) * t, lo, hi),
        }
    }
}

fn spaced(n: usize, f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| match i {
                0 => lo,
                _ if i == n - 1 => hi,
                _ => f(i as f64 / (n - 1) as f64),
            })
            .collect(),
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    t.parse::<f64>()
        .map_err(|_| Error::Plan(format!("'{t}' is not a number")))
}

fn parse_count(s: &str) -> Result<usize> {
    let t = s.trim();
    t.parse::<usize>()
        .map_err(|_| Error::Plan(format!("'{t}' is not a point count")))
}

impl FromStr for Grid {
    type Err = Error;

    /// `logspace(lo, hi, n)`, `linspace(lo, hi, n)` or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        for (prefix, log) in [("logspace(", true), ("linspace(", false)] {
            if let Some(inner) = t.strip_prefix(prefix) {
                let inner = inner
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Plan(format!("unclosed '{t}'")))?;
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Plan(format!("'{t}' needs lo, hi, n")));
                }
                let (lo, hi, n) = (
                    parse_number(parts[0])?,
                    parse_number(parts[1])?,
                    parse_count(parts[2])?,
                );
                if n == 0 {
                    return Err(Error::Plan(format!("'{t}' has no points")));
                }
                if log && !(lo > 0.0 && hi > 0.0) {
                    return Err(Error::Plan(format!("'{t}' needs positive endpoints")));
                }
                return Ok(if log {
                    Grid::Log { lo, hi, n }
                } else {
                    Grid::Lin { lo, hi, n }
                });
            }
        }
        let values = t
            .split(',')
            .map(parse_number)
            .collect::<Result<Vec<f64>>>()?;
        Ok(Grid::List(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    /// `Q_{1/2}`.
    QHalf,
    /// `ξ = −ln Q_{s*}`.
    Chernoff,
    /// `ξ / ξ_coherent` at the same grid point.
    RatioVsCoherent,
    /// `Q_{s*} / Q_{s*,vacuum}` at the same grid point.
    RatioVsVacuum,
    Fidelity,
    SStar,
    /// `−ln Q_{1/2}` over its coherent counterpart, in extended precision.
    BhattacharyyaRatio,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::QHalf,
        Quantity::Chernoff,
        Quantity::RatioVsCoherent,
        Quantity::RatioVsVacuum,
        Quantity::Fidelity,
        Quantity::SStar,
        Quantity::BhattacharyyaRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::QHalf => "q_half",
            Quantity::Chernoff => "chernoff",
            Quantity::RatioVsCoherent => "ratio_vs_coherent",
            Quantity::RatioVsVacuum => "ratio_vs_vacuum",
            Quantity::Fidelity => "fidelity",
            Quantity::SStar => "s_star",
            Quantity::BhattacharyyaRatio => "bhattacharyya_ratio",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == t)
            .ok_or_else(|| Error::Plan(format!("unknown quantity '{t}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Plan(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub transmitters: Vec<TransmitterKind>,
    pub n_s: Grid,
    pub n_b: Grid,
    pub kappa: Grid,
    pub model: TargetModel,
    pub quantities: Vec<Quantity>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl SweepPlan {
    /// Checks every grid value and quantity combination.
    pub fn validate(&self) -> Result<()> {
        if self.transmitters.is_empty() {
            return Err(Error::Plan("no transmitters".into()));
        }
        if self.quantities.is_empty() {
            return Err(Error::Plan("no quantities".into()));
        }
        let check = |name: &str, grid: &Grid, ok: &dyn Fn(f64) -> bool, want: &str| {
            let v = grid.values();
            if v.is_empty() {
                return Err(Error::Plan(format!("{name} grid is empty")));
            }
            match v.iter().find(|&&x| !ok(x)) {
                Some(bad) => Err(Error::Plan(format!("{name} = {bad}: {want}"))),
                None => Ok(()),
            }
        };
        check("n_s", &self.n_s, &|x| x >= 0.0 && x.is_finite(), "must be finite and ≥ 0")?;
        check("n_b", &self.n_b, &|x| x >= 0.0 && x.is_finite(), "must be finite and ≥ 0")?;
        check("kappa", &self.kappa, &|x| x > 0.0 && x < 1.0, "must lie in (0, 1)")?;
        if self.quantities.contains(&Quantity::Fidelity)
            && self.transmitters.iter().any(|k| k.n_modes() > 1)
        {
            return Err(Error::Plan("fidelity is single-mode only; drop tmss".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    ///
    /// Keys: `transmitters`, `n_s`, `n_b`, `kappa`, `model`, `quantities`,
    /// `out`, `format`. The first five are required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut transmitters = None;
        let mut n_s = None;
        let mut n_b = None;
        let mut kappa = None;
        let mut model = TargetModel::Agnostic;
        let mut quantities = None;
        let mut out = None;
        let mut format = Format::Csv;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Plan(format!("line {}: expected key = value", lineno + 1)))?;
            let value = value.trim();
            match key.trim() {
                "transmitters" | "transmitter" => {
                    transmitters = Some(
                        value
                            .split(',')
                            .map(str::parse)
                            .collect::<Result<Vec<TransmitterKind>>>()?,
                    )
                }
                "n_s" | "ns" => n_s = Some(value.parse()?),
                "n_b" | "nb" => n_b = Some(value.parse()?),
                "kappa" => kappa = Some(value.parse()?),
                "model" => model = value.parse()?,
                "quantities" | "quantity" => {
                    quantities = Some(
                        value
                            .split(',')
                            .map(str::parse)
                            .collect::<Result<Vec<Quantity>>>()?,
                    )
                }
                "out" => out = Some(PathBuf::from(value)),
                "format" => format = value.parse()?,
                other => {
                    return Err(Error::Plan(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        let missing = |k: &str| Error::Plan(format!("missing key '{k}'"));
        let plan = SweepPlan {
            transmitters: transmitters.ok_or_else(|| missing("transmitters"))?,
            n_s: n_s.ok_or_else(|| missing("n_s"))?,
            n_b: n_b.ok_or_else(|| missing("n_b"))?,
            kappa: kappa.ok_or_else(|| missing("kappa"))?,
            model,
            quantities: quantities.ok_or_else(|| missing("quantities"))?,
            out,
            format,
        };
        plan.validate()?;
        Ok(plan)
    }
}
