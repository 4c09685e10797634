//! Flat-file formats: raw income lists, binned CCDF tables, Lorenz curve CSV
//! and JSON/CSV reports.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::empirical::{normalize, BinnedCcdf, EmpiricalDistribution, Normalization};
use crate::error::{GpdError, Result};
use crate::inequality::LorenzCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputFormat {
    /// One income per line.
    Raw,
    /// Two comma-separated columns `x,F`.
    Binned,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "raw" => Ok(InputFormat::Raw),
            "binned" => Ok(InputFormat::Binned),
            other => Err(format!("unknown input format `{other}` (expected raw or binned)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format `{other}` (expected json or csv)")),
        }
    }
}

impl FromStr for Normalization {
    type Err = String;

    /// `mean`, `none` or `const=<value>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mean" => Ok(Normalization::Mean),
            "none" => Ok(Normalization::None),
            _ => {
                let v = s
                    .strip_prefix("const=")
                    .ok_or_else(|| format!("unknown normalization `{s}`"))?;
                let c: f64 = v
                    .parse()
                    .map_err(|_| format!("bad normalization constant `{v}`"))?;
                Ok(Normalization::Constant(c))
            }
        }
    }
}

/// Contents of an input file.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Sample(EmpiricalDistribution),
    Binned(BinnedCcdf),
}

/// Reads raw incomes. Blank lines are skipped and a non-numeric first line
/// is taken as a header.
pub fn parse_raw<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => values.push(v),
            Ok(v) if v.is_finite() => return Err(GpdError::NegativeIncome(v)),
            _ if !seen_content => {}
            _ => {
                return Err(GpdError::MalformedLine {
                    line: i + 1,
                    content: t.to_string(),
                })
            }
        }
        seen_content = true;
    }
    if values.is_empty() {
        return Err(GpdError::EmptyInput);
    }
    Ok(values)
}

/// Reads a binned CCDF table `x,F`, with an optional header line.
pub fn parse_binned<R: BufRead>(reader: R) -> Result<BinnedCcdf> {
    let mut points = Vec::new();
    let mut seen_content = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let parsed = t.split_once(',').and_then(|(a, b)| {
            Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?))
        });
        match parsed {
            Some(p) => points.push(p),
            None if !seen_content => {}
            None => {
                return Err(GpdError::MalformedLine {
                    line: i + 1,
                    content: t.to_string(),
                })
            }
        }
        seen_content = true;
    }
    if points.is_empty() {
        return Err(GpdError::EmptyInput);
    }
    BinnedCcdf::new(points)
}

/// Loads an input file. Normalization applies to raw samples only.
pub fn ingest(path: &Path, format: InputFormat, normalization: Normalization) -> Result<Dataset> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        InputFormat::Raw => {
            let raw = parse_raw(reader)?;
            Ok(Dataset::Sample(normalize(&raw, normalization)?))
        }
        InputFormat::Binned => Ok(Dataset::Binned(parse_binned(reader)?)),
    }
}

/// Writes one value per line with round-trip precision.
pub fn write_raw<W: Write>(mut w: W, values: &[f64]) -> Result<()> {
    for v in values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_raw_file(path: &Path, values: &[f64]) -> Result<()> {
    write_raw(BufWriter::new(File::create(path)?), values)
}

#[derive(Debug, Serialize, Deserialize)]
struct LorenzRow {
    #[serde(rename = "F")]
    f: f64,
    #[serde(rename = "F1")]
    f1: f64,
    transition: u8,
}

/// Lorenz curve as CSV with columns `F,F1,transition`; the transition row
/// carries a 1.
pub fn write_lorenz_csv<W: Write>(w: W, curve: &LorenzCurve) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for (i, &(f, f1)) in curve.points().iter().enumerate() {
        wtr.serialize(LorenzRow {
            f,
            f1,
            transition: u8::from(curve.transition_index() == Some(i)),
        })?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_lorenz_csv<R: Read>(r: R) -> Result<LorenzCurve> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut points = Vec::new();
    let mut transition = None;
    for (i, row) in rdr.deserialize::<LorenzRow>().enumerate() {
        let row = row?;
        if row.transition == 1 {
            transition = Some(i);
        }
        points.push((row.f, row.f1));
    }
    if points.is_empty() {
        return Err(GpdError::EmptyInput);
    }
    Ok(LorenzCurve::from_points(points, transition))
}

/// Writes records as CSV with a header row.
pub fn write_csv<W: Write, T: Serialize>(w: W, records: &[T]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read, T: DeserializeOwned>(r: R) -> Result<Vec<T>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().map(|r| r.map_err(GpdError::from)).collect()
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<R: Read, T: DeserializeOwned>(r: R) -> Result<T> {
    Ok(serde_json::from_reader(r)?)
}
