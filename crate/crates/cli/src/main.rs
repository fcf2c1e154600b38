use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qi_core::divergence::chernoff_opts;
use qi_core::error::Error;
use qi_core::minimize::MinimizeOptions;
use qi_core::sweep::{
    emit, limit_order_study, reproduce_figure, verify_expansion, write_rows, CheckName,
    ExpansionCheck, Figure, Format, Grid, Quantity, Row, SweepPlan,
};
use qi_core::target::{make_pair, TargetConfig, TargetModel};
use qi_core::transmitters::{TransmitterKind, TransmitterSpec};

#[derive(Parser)]
#[command(name = "qi", version, about = "Chernoff exponents for Gaussian target detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write rows here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Chernoff exponent, optimal s and Q_{1/2} at one point.
    #[command(allow_negative_numbers = true)]
    Chernoff {
        #[arg(long)]
        transmitter: TransmitterKind,
        #[arg(long, default_value_t = 0.0)]
        ns: f64,
        #[arg(long)]
        nb: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value = "agnostic")]
        model: TargetModel,
        /// Absolute tolerance on s*.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Runs a key = value plan file; flags override the file.
    Sweep {
        plan: PathBuf,
        #[arg(long, value_delimiter = ',')]
        transmitter: Option<Vec<TransmitterKind>>,
        #[arg(long)]
        kappa: Option<Grid>,
        #[arg(long)]
        model: Option<TargetModel>,
        #[arg(long)]
        grid_ns: Option<Grid>,
        #[arg(long)]
        grid_nb: Option<Grid>,
        #[command(flatten)]
        output: Output,
    },
    /// Data and summary for one figure. Summary goes to stderr.
    Figure {
        name: Figure,
        #[command(flatten)]
        output: Output,
    },
    /// Residual-order check of an expansion, or `all`.
    #[command(allow_negative_numbers = true)]
    Verify {
        check: String,
        /// Allowed shortfall of the fitted order below the stated one.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Bhattacharyya-exponent ratios along both limit orderings.
    Limits {
        model: TargetModel,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn write_out(rows: &[Row], out: Option<&PathBuf>, format: Format) -> Result<(), Failure> {
    match out {
        Some(path) => emit(rows, path, format)?,
        None => {
            let stdout = io::stdout();
            write_rows(rows, format, stdout.lock())?;
        }
    }
    Ok(())
}

fn chernoff_rows(
    kind: TransmitterKind,
    ns: f64,
    nb: f64,
    kappa: f64,
    model: TargetModel,
    tol: f64,
) -> Result<Vec<Row>, Failure> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Failure::Input(format!("--tol {tol}: must lie in (0, 0.1)")));
    }
    let spec = TransmitterSpec::new(kind, ns)?;
    let cfg = TargetConfig::new(kappa, nb, model)?;
    let pair = make_pair(&spec, &cfg)?;
    let opts = MinimizeOptions {
        x_tol: tol,
        ..MinimizeOptions::default()
    };
    let r = chernoff_opts(&pair, &opts)?;
    let flags: Vec<String> = r.flags.labels().into_iter().map(String::from).collect();
    let row = |quantity, value, s_star| Row {
        transmitter: kind,
        model,
        n_s: spec.n_signal,
        n_b: nb,
        kappa,
        quantity,
        value,
        s_star,
        flags: flags.clone(),
    };
    Ok(vec![
        row(Quantity::Chernoff, r.xi, Some(r.s_star)),
        row(Quantity::QHalf, r.q_half, None),
    ])
}

fn print_check(check: &ExpansionCheck, w: &mut impl Write) -> io::Result<()> {
    for s in &check.series {
        writeln!(
            w,
            "{} {} stated {} fitted {:.4} {}{}",
            check.name,
            s.label,
            s.stated_order,
            s.fitted_order,
            if s.pass { "PASS" } else { "FAIL" },
            s.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Chernoff {
            transmitter,
            ns,
            nb,
            kappa,
            model,
            tol,
            output,
        } => {
            let rows = chernoff_rows(transmitter, ns, nb, kappa, model, tol)?;
            write_out(&rows, output.out.as_ref(), output.format.unwrap_or_default())
        }
        Command::Sweep {
            plan,
            transmitter,
            kappa,
            model,
            grid_ns,
            grid_nb,
            output,
        } => {
            let text = std::fs::read_to_string(&plan)
                .map_err(|e| Failure::Input(format!("{}: {e}", plan.display())))?;
            let mut p = SweepPlan::parse(&text)?;
            if let Some(t) = transmitter {
                p.transmitters = t;
            }
            if let Some(k) = kappa {
                p.kappa = k;
            }
            if let Some(m) = model {
                p.model = m;
            }
            if let Some(g) = grid_ns {
                p.n_s = g;
            }
            if let Some(g) = grid_nb {
                p.n_b = g;
            }
            if output.out.is_some() {
                p.out = output.out;
            }
            if let Some(f) = output.format {
                p.format = f;
            }
            p.validate()?;
            let rows = qi_core::sweep::run_sweep(&p)?;
            write_out(&rows, p.out.as_ref(), p.format)
        }
        Command::Figure { name, output } => {
            let report = reproduce_figure(name);
            write_out(&report.rows, output.out.as_ref(), output.format.unwrap_or_default())?;
            let mut err = io::stderr().lock();
            for s in &report.summary {
                writeln!(
                    err,
                    "{} {} = {} [{}] {}",
                    name,
                    s.name,
                    s.value,
                    s.target,
                    if s.pass { "PASS" } else { "FAIL" }
                )?;
            }
            if report.pass() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Verify { check, tol } => {
            let names: Vec<CheckName> = if check == "all" {
                CheckName::ALL.to_vec()
            } else {
                vec![check.parse()?]
            };
            if let Some(t) = tol {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Failure::Input(format!("--tol {t}: must be finite and ≥ 0")));
                }
            }
            let mut out = io::stdout().lock();
            let mut all = true;
            for name in names {
                let mut c = verify_expansion(ExpansionCheck::new(name));
                if let Some(t) = tol {
                    for s in &mut c.series {
                        s.pass = s.error.is_none() && s.fitted_order >= s.stated_order - t;
                    }
                    c.pass = c.series.iter().all(|s| s.pass);
                }
                print_check(&c, &mut out)?;
                all &= c.pass;
            }
            if all {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Limits { model, output } => {
            let rows = limit_order_study(model);
            write_out(&rows, output.out.as_ref(), output.format.unwrap_or_default())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check) => ExitCode::from(2),
    }
}
