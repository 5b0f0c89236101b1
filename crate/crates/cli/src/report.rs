use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;

pub const CSV_HEADER: [&str; 6] = ["metric", "value", "stderr", "n", "tail_bound", "flag"];

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub metric: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub n: Option<u64>,
    pub tail_bound: Option<f64>,
    pub flag: Option<String>,
}

impl Metric {
    pub fn value(name: &str, value: f64) -> Self {
        Metric {
            metric: name.to_string(),
            value,
            stderr: None,
            n: None,
            tail_bound: None,
            flag: None,
        }
    }

    pub fn estimate(name: &str, value: f64, stderr: f64, n: u64) -> Self {
        Metric {
            stderr: Some(stderr),
            n: Some(n),
            ..Metric::value(name, value)
        }
    }

    pub fn tail(mut self, t: f64) -> Self {
        self.tail_bound = Some(t);
        self
    }

    pub fn flag(mut self, f: &str) -> Self {
        self.flag = Some(f.to_string());
        self
    }

    pub fn check(name: &str, value: f64, ok: bool) -> Self {
        Metric::value(name, value).flag(if ok { "pass" } else { "fail" })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Exact value the main estimate is compared with, when one exists.
    pub target: Option<f64>,
    /// Some bound in the report says nothing at these parameters.
    pub vacuous_bound: bool,
    pub metrics: Vec<Metric>,
    /// Full result structures of the computation.
    pub details: serde_json::Value,
    pub config: ExperimentConfig,
    pub timestamp: String,
    pub wall_time_s: f64,
}

impl Report {
    /// Copy with the run-dependent fields blanked, for replay comparisons.
    pub fn without_volatile(&self) -> Report {
        let mut r = self.clone();
        r.timestamp.clear();
        r.wall_time_s = 0.0;
        r.config.threads = 0;
        r.config.out_path = None;
        r
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.metric == name)
    }

    pub fn failed_checks(&self) -> Vec<&Metric> {
        self.metrics
            .iter()
            .filter(|m| m.flag.as_deref() == Some("fail"))
            .collect()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_report<W: Write>(report: &Report, format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for m in &report.metrics {
                w.write_record([
                    m.metric.clone(),
                    m.value.to_string(),
                    opt(m.stderr),
                    m.n.map(|n| n.to_string()).unwrap_or_default(),
                    opt(m.tail_bound),
                    m.flag.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes to `path`, or standard output when `None`.
pub fn emit_report(report: &Report, path: Option<&Path>, format: Format) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut w = std::io::BufWriter::new(f);
            write_report(report, format, &mut w)?;
            w.flush().map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => write_report(report, format, std::io::stdout().lock()),
    }
}
