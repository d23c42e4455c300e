//! Experiment artifacts on disk: a versioned JSON report plus CSV series.
//! Everything except the timestamp field is a pure function of the resolved
//! configuration, so reruns are byte-identical modulo that one line.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub experiment: String,
    /// Fully resolved configuration echo.
    pub params: serde_json::Value,
    pub seeds: Vec<u64>,
    pub metrics: serde_json::Value,
    pub criteria: Vec<CriterionResult>,
    /// Seconds since the epoch; the only rerun-variant field.
    pub timestamp: u64,
}

impl Report {
    pub fn new(experiment: &str, params: serde_json::Value) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            experiment: experiment.to_string(),
            params,
            seeds: Vec::new(),
            metrics: serde_json::Value::Null,
            criteria: Vec::new(),
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn push_criterion(&mut self, name: &str, passed: bool, value: f64, threshold: &str) {
        self.criteria.push(CriterionResult {
            name: name.to_string(),
            passed,
            value,
            threshold: threshold.to_string(),
        });
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(io_err)?;
        let path = dir.join("report.json");
        let body =
            serde_json::to_string_pretty(self).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        fs::write(path, body + "\n").map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidConfig(format!("io: {e}"))
}

/// Shortest round-trip decimal form; stable across reruns.
pub fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.1}")
    } else {
        format!("{x}")
    }
}

/// Write a CSV series with the given header and numeric rows.
pub fn write_csv<I>(dir: &Path, file: &str, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut out = fs::File::create(dir.join(file)).map_err(io_err)?;
    writeln!(out, "{header}").map_err(io_err)?;
    for row in rows {
        let line = row
            .iter()
            .map(|&v| fmt_f64(v))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}
