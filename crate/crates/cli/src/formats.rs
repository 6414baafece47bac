//! CSV and JSON readers/writers for the pipeline artifacts. Column schemas
//! are fixed in docs/FORMATS.md; floats are printed with 17 significant
//! digits so a parse round-trips losslessly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qprimes_core::primality::ClassificationReport;
use qprimes_core::sim::PurityMethod;
use qprimes_core::spectral::{FourierSpectrum, PuritySeries, SeriesPoint, SpectrumSource};
use qprimes_core::walsh::WalshSpectrum;

use crate::config::Format;
use crate::{CliError, CliResult};

/// 17 significant digits: enough for f64 round-trips.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Sparse angle listing written by the `angles` subcommand.
#[derive(Debug, Serialize, Deserialize)]
pub struct AnglesFile {
    pub d: usize,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub entries: Vec<AngleEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AngleEntry {
    pub j: usize,
    pub raw: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled: Option<f64>,
}

impl AnglesFile {
    pub fn new(d: usize, spectrum: &WalshSpectrum, scaled: Option<(f64, f64)>) -> Self {
        let factor = scaled.map(|(omega, t)| -omega * t / (d * d) as f64);
        AnglesFile {
            d,
            q: spectrum.qubits(),
            omega: scaled.map(|(omega, _)| omega),
            t: scaled.map(|(_, t)| t),
            entries: spectrum
                .iter()
                .map(|(j, raw)| AngleEntry {
                    j,
                    raw,
                    scaled: factor.map(|f| f * raw as f64),
                })
                .collect(),
        }
    }
}

pub fn write_angles(path: &Path, file: &AnglesFile, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(path, file),
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["j", "raw", "scaled"])?;
            for e in &file.entries {
                w.write_record([
                    e.j.to_string(),
                    e.raw.to_string(),
                    e.scaled.map(fmt_f64).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_series(path: &Path, series: &PuritySeries, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(path, series),
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["t", "gamma"])?;
            for p in series.points() {
                w.write_record([fmt_f64(p.t), fmt_f64(p.gamma)])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

/// Read a series back. CSV carries only the grid, so the caller must supply
/// `d`; omega and the partition count are recovered from the grid itself
/// (`t_last = T/2 = pi / omega`).
pub fn read_series(path: &Path, d_hint: Option<usize>) -> CliResult<PuritySeries> {
    if is_json(path) {
        let series: PuritySeries = serde_json::from_str(&fs::read_to_string(path)?)?;
        if let Some(d) = d_hint {
            if d != series.d() {
                return Err(CliError::Config(format!(
                    "--d {d} contradicts series file recorded for d = {}",
                    series.d()
                )));
            }
        }
        return Ok(series);
    }
    let d = d_hint.ok_or_else(|| {
        CliError::Config("a CSV series carries no dimension; pass --d".to_string())
    })?;
    let mut rdr = csv::Reader::from_path(path)?;
    let mut points = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let t: f64 = parse_field(&record, 0, "t")?;
        let gamma: f64 = parse_field(&record, 1, "gamma")?;
        points.push(SeriesPoint {
            t,
            gamma,
            method: PurityMethod::ExactTrace,
            shots: 0,
            p0: None,
            seed: None,
        });
    }
    if points.len() < 3 {
        return Err(CliError::Config(format!(
            "series at {} has only {} grid points",
            path.display(),
            points.len()
        )));
    }
    let partitions = points.len() - 1;
    let t_last = points[partitions].t;
    if !(t_last > 0.0) {
        return Err(CliError::Config("series grid must end at T/2 > 0".into()));
    }
    let omega = std::f64::consts::PI / t_last;
    Ok(PuritySeries::new(d, omega, partitions, points)?)
}

pub fn write_spectrum(path: &Path, spectrum: &FourierSpectrum, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(path, spectrum),
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["n", "alpha", "bound", "regime"])?;
            for n in 0..=spectrum.nmax() {
                let regime = qprimes_core::primality::regime_of(n, spectrum.d())
                    .map(|r| r.as_str())
                    .unwrap_or("-");
                w.write_record([
                    n.to_string(),
                    fmt_f64(spectrum.mode(n).unwrap()),
                    spectrum.bound(n).map(fmt_f64).unwrap_or_default(),
                    regime.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn read_spectrum(path: &Path, d_hint: Option<usize>) -> CliResult<FourierSpectrum> {
    if is_json(path) {
        let spectrum: FourierSpectrum = serde_json::from_str(&fs::read_to_string(path)?)?;
        if let Some(d) = d_hint {
            if d != spectrum.d() {
                return Err(CliError::Config(format!(
                    "--d {d} contradicts spectrum file recorded for d = {}",
                    spectrum.d()
                )));
            }
        }
        return Ok(spectrum);
    }
    let d = d_hint.ok_or_else(|| {
        CliError::Config("a CSV spectrum carries no dimension; pass --d".to_string())
    })?;
    let mut rdr = csv::Reader::from_path(path)?;
    let mut modes = Vec::new();
    let mut bounds = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let n: usize = parse_field(&record, 0, "n")?;
        if n != i {
            return Err(CliError::Config(format!(
                "spectrum rows must be consecutive from n = 0; row {i} has n = {n}"
            )));
        }
        modes.push(parse_field(&record, 1, "alpha")?);
        let bound_field = record.get(2).unwrap_or("");
        bounds.push(if bound_field.is_empty() {
            None
        } else {
            Some(bound_field.parse::<f64>().map_err(|e| {
                CliError::Config(format!("bad bound in spectrum row {i}: {e}"))
            })?)
        });
    }
    Ok(FourierSpectrum::from_parts(
        d,
        SpectrumSource::Simpson,
        modes,
        bounds,
    )?)
}

pub fn write_classification(
    path: &Path,
    report: &ClassificationReport,
    format: Format,
) -> CliResult<()> {
    match format {
        Format::Json => write_json(path, report),
        Format::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["n", "regime", "alpha", "bound", "verdict", "oracle", "agree"])?;
            for row in &report.rows {
                w.write_record([
                    row.n.to_string(),
                    row.regime.as_str().to_string(),
                    fmt_f64(row.alpha),
                    row.bound.map(fmt_f64).unwrap_or_default(),
                    row.verdict.as_str().to_string(),
                    if row.oracle_prime { "prime" } else { "composite" }.to_string(),
                    row.agree.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}

fn is_json(path: &Path) -> bool {
    path.extension().map(|e| e == "json").unwrap_or(false)
}

fn parse_field<T: std::str::FromStr>(
    record: &csv::StringRecord,
    index: usize,
    name: &str,
) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    let raw = record
        .get(index)
        .ok_or_else(|| CliError::Config(format!("missing column {name}")))?;
    raw.parse::<T>()
        .map_err(|e| CliError::Config(format!("bad {name} value {raw:?}: {e}")))
}
