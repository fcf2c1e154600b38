//! Parameter sweeps, figure data, expansion checks and the limit-order study.

pub mod emit;
pub mod expansion;
pub mod figures;
pub mod limits;
pub mod plan;
pub mod run;

pub use emit::{emit, format_float, read_csv, write_csv, write_json, write_rows, Record, CSV_HEADER};
pub use expansion::{fit_order, verify, verify_expansion, CheckName, ExpansionCheck, ResidualPoint, Series};
pub use figures::{reproduce_figure, Figure, FigureReport, SummaryItem};
pub use limits::limit_order_study;
pub use plan::{Format, Grid, Quantity, SweepPlan};
pub use run::{plan_points, run_sweep, run_sweep_with, Point, Row};
