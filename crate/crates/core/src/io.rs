//! Series files and diagnostic reports.
//!
//! A series file holds one observation per line, optionally preceded by a
//! single header line. Blank lines are ignored. Numbers are parsed with a dot
//! decimal separator regardless of locale, and written in the shortest form
//! that parses back to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acf::LambdaDiagnostics;
use crate::series::TimeSeries;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: cannot parse `{text}` as a finite number")]
    Parse { line: usize, text: String },
    #[error("no observations found")]
    Empty,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Parsed contents of a series file.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFile {
    pub header: Option<String>,
    pub series: TimeSeries,
}

fn parse_value(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses series text. A first line that is not a number is taken as the header.
pub fn parse_series(text: &str) -> Result<SeriesFile, IoError> {
    let mut header = None;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match parse_value(line) {
            Some(v) => values.push(v),
            None if idx == 0 => header = Some(line.to_string()),
            None => {
                return Err(IoError::Parse {
                    line: idx + 1,
                    text: line.to_string(),
                })
            }
        }
    }
    let series = TimeSeries::new(values).map_err(|_| IoError::Empty)?;
    Ok(SeriesFile { header, series })
}

pub fn read_series(path: &Path) -> Result<SeriesFile, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let mut file = parse_series(&text)?;
    file.series = file.series.with_source(path.display().to_string());
    Ok(file)
}

pub fn format_series(values: &[f64], header: Option<&str>) -> String {
    let mut out = String::with_capacity(values.len() * 22);
    if let Some(h) = header {
        out.push_str(h);
        out.push('\n');
    }
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn write_series(path: &Path, values: &[f64], header: Option<&str>) -> Result<(), IoError> {
    write_text(path, &format_series(values, header))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Per-λ correlogram blocks for one input series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub source: Option<String>,
    pub n: usize,
    pub blocks: Vec<LambdaDiagnostics>,
}

impl DiagnosticsReport {
    pub fn new(series: &TimeSeries, blocks: Vec<LambdaDiagnostics>) -> Self {
        DiagnosticsReport {
            source: series.provenance().source.clone(),
            n: series.len(),
            blocks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Aligned text tables, one per λ. A `*` marks lags outside the band.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(src) = &self.source {
            let _ = writeln!(out, "series: {src}");
        }
        let _ = writeln!(out, "n = {}", self.n);
        for block in &self.blocks {
            let d = &block.diagnostics;
            let _ = writeln!(
                out,
                "\nlambda = {}  (level {}, correction {})",
                block.lambda, d.level, d.correction
            );
            let _ = writeln!(out, "{:>5}  {:>12}  {:>12}  {:>12}", "lag", "rho_hat", "w_hat", "band");
            for i in 0..d.max_lag {
                let flag = if d.rho_hat[i].abs() > d.band_halfwidth[i] { " *" } else { "" };
                let _ = writeln!(
                    out,
                    "{:>5}  {:>12.6}  {:>12.6}  {:>12.6}{}",
                    i + 1,
                    d.rho_hat[i],
                    d.w_hat[i],
                    d.band_halfwidth[i],
                    flag
                );
            }
            let _ = writeln!(out, "{}", portmanteau_line(block));
        }
        out
    }

    pub fn portmanteau_text(&self) -> String {
        let mut out = String::new();
        for block in &self.blocks {
            let _ = writeln!(out, "lambda = {}  {}", block.lambda, portmanteau_line(block));
        }
        out
    }

    /// `lambda,lag,rho,band` rows for external plotting.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("lambda,lag,rho,band\n");
        for block in &self.blocks {
            let d = &block.diagnostics;
            for i in 0..d.max_lag {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    block.lambda,
                    i + 1,
                    d.rho_hat[i],
                    d.band_halfwidth[i]
                );
            }
        }
        out
    }
}

fn portmanteau_line(block: &LambdaDiagnostics) -> String {
    let d = &block.diagnostics;
    format!(
        "portmanteau: stat = {:.6}, df = {}, p-value = {:.6}",
        d.portmanteau_stat, d.max_lag, d.portmanteau_pvalue
    )
}
