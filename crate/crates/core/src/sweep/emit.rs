//! CSV and JSON output of sweep rows.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::plan::{Format, Quantity};
use super::run::Row;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 9] = [
    "transmitter",
    "model",
    "n_s",
    "n_b",
    "kappa",
    "quantity",
    "value",
    "s_star",
    "flags",
];

/// 17 significant digits, enough to round-trip every `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// JSON form of a [`Row`]; non-finite values become `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub transmitter: String,
    pub model: String,
    pub n_s: f64,
    pub n_b: f64,
    pub kappa: f64,
    pub quantity: String,
    pub value: Option<f64>,
    pub s_star: Option<f64>,
    pub flags: String,
}

impl From<&Row> for Record {
    fn from(r: &Row) -> Self {
        Record {
            transmitter: r.transmitter.to_string(),
            model: r.model.to_string(),
            n_s: r.n_s,
            n_b: r.n_b,
            kappa: r.kappa,
            quantity: r.quantity.to_string(),
            value: Some(r.value).filter(|v| v.is_finite()),
            s_star: r.s_star,
            flags: r.flags.join(";"),
        }
    }
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record([
            r.transmitter.to_string(),
            r.model.to_string(),
            format_float(r.n_s),
            format_float(r.n_b),
            format_float(r.kappa),
            r.quantity.to_string(),
            format_float(r.value),
            r.s_star.map(format_float).unwrap_or_default(),
            r.flags.join(";"),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[Row], w: W) -> Result<()> {
    let records: Vec<Record> = rows.iter().map(Record::from).collect();
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, &records)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[Row], format: Format, w: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(rows, w),
        Format::Json => write_json(rows, w),
    }
}

/// Writes `rows` to `path`.
pub fn emit(rows: &[Row], path: &Path, format: Format) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    write_rows(rows, format, &mut w)?;
    w.flush()?;
    Ok(())
}

fn field(rec: &csv::StringRecord, i: usize) -> Result<&str> {
    rec.get(i)
        .ok_or_else(|| Error::Io(format!("row has {} fields, expected 9", rec.len())))
}

fn float(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Io(format!("'{s}' is not a number")))
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv<R: Read>(r: R) -> Result<Vec<Row>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Io("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let s_star = field(&rec, 7)?;
        let flags = field(&rec, 8)?;
        rows.push(Row {
            transmitter: field(&rec, 0)?.parse()?,
            model: field(&rec, 1)?.parse()?,
            n_s: float(field(&rec, 2)?)?,
            n_b: float(field(&rec, 3)?)?,
            kappa: float(field(&rec, 4)?)?,
            quantity: field(&rec, 5)?.parse::<Quantity>()?,
            value: float(field(&rec, 6)?)?,
            s_star: if s_star.is_empty() { None } else { Some(float(s_star)?) },
            flags: if flags.is_empty() {
                vec![]
            } else {
                flags.split(';').map(String::from).collect()
            },
        });
    }
    Ok(rows)
}
