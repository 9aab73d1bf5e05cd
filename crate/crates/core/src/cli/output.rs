//! CSV artifacts: traces, posterior dumps, sweep summaries.
//!
//! Reals are written in the shortest form that parses back to the same
//! `f64` (Rust's `{:?}`, which switches to exponent notation for very large
//! or small magnitudes), so files round-trip exactly. Every file is
//! written to a temporary sibling and renamed into place.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::acquisition::PosteriorGrid;
use crate::optimizer::{Move, StopReason, TraceRecord};
use crate::space::Observation;

/// Write `contents` to `path` via a temp file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_reals(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>().join(",")
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

pub fn trace_header(dims: usize) -> String {
    let mut cols = vec!["iter".to_string(), "move".to_string()];
    cols.extend((0..dims).map(|d| format!("theta_{d}")));
    cols.extend(
        ["y", "y_best", "acq_value", "max_std", "rho", "threshold_used", "nu"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols.join(",")
}

pub fn trace_csv(records: &[TraceRecord]) -> String {
    let dims = records.first().map_or(0, |r| r.theta.len());
    let mut out = trace_header(dims);
    out.push('\n');
    for r in records {
        let mut row = vec![r.iter.to_string(), r.mv.as_str().to_string()];
        row.push(fmt_reals(&r.theta));
        row.push(fmt_real(r.y));
        row.push(fmt_real(r.y_best));
        row.extend([r.acq_value, r.max_std, r.rho, r.threshold_used, r.nu].map(cell));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_trace(records: &[TraceRecord], path: &Path) -> io::Result<()> {
    if records.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "empty trace"));
    }
    write_atomic(path, trace_csv(records).as_bytes())
}

fn bad_data(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

/// Parse a file written by [`write_trace`].
pub fn read_trace(path: &Path) -> io::Result<Vec<TraceRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad_data(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad_data(e.to_string()))?.clone();
    let dims = headers.len().saturating_sub(9);
    if headers.iter().collect::<Vec<_>>().join(",") != trace_header(dims) {
        return Err(bad_data(format!("unexpected trace header in {}", path.display())));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| bad_data(format!("{s:?}: {e}")));
    let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| bad_data(e.to_string()))?;
        let mv = match &row[1] {
            "Init" => Move::Init,
            "Exploit" => Move::Exploit,
            "Explore" => Move::Explore,
            other => return Err(bad_data(format!("unknown move {other:?}"))),
        };
        let theta = (0..dims).map(|d| num(&row[2 + d])).collect::<io::Result<Vec<_>>>()?;
        let at = |k: usize| &row[2 + dims + k];
        out.push(TraceRecord {
            iter: row[0].parse().map_err(|e| bad_data(format!("iter: {e}")))?,
            mv,
            theta,
            y: num(at(0))?,
            y_best: num(at(1))?,
            acq_value: opt(at(2))?,
            max_std: opt(at(3))?,
            rho: opt(at(4))?,
            threshold_used: opt(at(5))?,
            nu: opt(at(6))?,
        });
    }
    Ok(out)
}

/// Write `posterior_<iter>.csv` and `observations_<iter>.csv` into `dir`.
pub fn dump_posterior(
    grid: &PosteriorGrid,
    observations: &[Observation],
    iter: usize,
    dir: &Path,
) -> io::Result<()> {
    let dims = grid.candidates.first().map_or(0, Vec::len);
    let theta_cols: Vec<String> = (0..dims).map(|d| format!("theta_{d}")).collect();

    let mut post = format!("{},mean,std\n", theta_cols.join(","));
    for ((c, m), s) in grid.candidates.iter().zip(&grid.means).zip(&grid.stds) {
        post.push_str(&format!("{},{},{}\n", fmt_reals(c), fmt_real(*m), fmt_real(*s)));
    }
    write_atomic(&dir.join(format!("posterior_{iter}.csv")), post.as_bytes())?;

    let mut obs = format!("{},y\n", theta_cols.join(","));
    for o in observations {
        obs.push_str(&format!("{},{}\n", fmt_reals(&o.theta), fmt_real(o.y)));
    }
    write_atomic(&dir.join(format!("observations_{iter}.csv")), obs.as_bytes())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRow {
    pub seed: u64,
    pub theta_best: Vec<f64>,
    pub y_best: f64,
    pub iterations_used: usize,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub average: f64,
    pub minimum: f64,
    pub maximum: f64,
    /// Sample standard deviation (n − 1); zero for a single value.
    pub std_dev: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let average = values.iter().sum::<f64>() / n;
        let ss: f64 = values.iter().map(|v| (v - average).powi(2)).sum();
        Self {
            average,
            minimum: values.iter().copied().fold(f64::INFINITY, f64::min),
            maximum: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            std_dev: if values.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryReport {
    pub rows: Vec<SeedRow>,
    pub y_best: Stats,
    pub iterations_used: Stats,
}

impl SummaryReport {
    pub fn new(rows: Vec<SeedRow>) -> Self {
        let ys: Vec<f64> = rows.iter().map(|r| r.y_best).collect();
        let its: Vec<f64> = rows.iter().map(|r| r.iterations_used as f64).collect();
        Self {
            y_best: Stats::of(&ys),
            iterations_used: Stats::of(&its),
            rows,
        }
    }

    /// Per-seed rows, then one row per statistic with the statistic's name
    /// in the `seed` column.
    pub fn to_csv(&self) -> String {
        let dims = self.rows.first().map_or(0, |r| r.theta_best.len());
        let theta_cols: Vec<String> = (0..dims).map(|d| format!("theta_{d}")).collect();
        let mut out = format!("seed,{},y_best,iterations_used,stop_reason\n", theta_cols.join(","));
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.seed,
                fmt_reals(&r.theta_best),
                fmt_real(r.y_best),
                r.iterations_used,
                r.stop_reason.as_str()
            ));
        }
        let blanks = ",".repeat(dims);
        for (name, y, it) in [
            ("Average", self.y_best.average, self.iterations_used.average),
            ("Minimum", self.y_best.minimum, self.iterations_used.minimum),
            ("Maximum", self.y_best.maximum, self.iterations_used.maximum),
            ("Standard Deviation", self.y_best.std_dev, self.iterations_used.std_dev),
        ] {
            out.push_str(&format!("{name}{blanks},{},{},\n", fmt_real(y), fmt_real(it)));
        }
        out
    }
}
