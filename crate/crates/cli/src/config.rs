use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Expected multiarea against pi^2 d.
    Multiarea,
    /// Expected amoeba area against the deterministic upper bounds.
    Area,
    /// Probability that the curve meets one torus.
    PPoint,
    /// Mean intersection count with one torus.
    Crofton,
    /// Deterministic bounds for one degree.
    Bounds,
    /// Graph-chart frequency and the chart guarantee.
    Charts,
    /// Built-in self-checks.
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Multiarea => "multiarea",
            Command::Area => "area",
            Command::PPoint => "p-point",
            Command::Crofton => "crofton",
            Command::Bounds => "bounds",
            Command::Charts => "charts",
            Command::Validate => "validate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Command line as typed.
#[derive(Debug, Parser)]
#[command(name = "amoeba-lab", version = env!("AMOEBA_LAB_VERSION"), about = "Monte Carlo experiments on amoebas of random complex plane curves")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Half-width T of the sampling window [-T, T]^2; defaults to ln(d) + 4.
    #[arg(long = "window")]
    pub window_t: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub theta_base: usize,
    /// Points of the horizontal disc tested by the chart check.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    /// Torus radii `x,y`.
    #[arg(long, value_parser = parse_pair, default_value = "1,1")]
    pub torus: (f64, f64),
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "AMOEBA_LAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Report path; standard output when absent.
    #[arg(long = "out")]
    pub out_path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// With `p-point`: also write p over a lattice of the window to this CSV file.
    #[arg(long)]
    pub emit_grid: Option<PathBuf>,
    /// Lattice side for `--emit-grid`.
    #[arg(long, default_value_t = 11)]
    pub lattice: usize,
}

/// Fully resolved and validated configuration, echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub degree: usize,
    pub samples: u64,
    pub window_t: f64,
    pub theta_base: usize,
    pub grid: usize,
    pub kappa: f64,
    pub torus_x: f64,
    pub torus_y: f64,
    pub seed: u64,
    pub threads: usize,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub emit_grid: Option<PathBuf>,
    pub lattice: usize,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `x,y`")?;
    let f = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((f(a)?, f(b)?))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Cli {
    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let cfg = ExperimentConfig {
            command: self.command,
            degree: self.degree,
            samples: self.samples,
            window_t: self
                .window_t
                .unwrap_or_else(|| amoeba_core::amoeba::default_window(self.degree.max(1))),
            theta_base: self.theta_base,
            grid: self.grid,
            kappa: self.kappa,
            torus_x: self.torus.0,
            torus_y: self.torus.1,
            seed: self.seed,
            threads: self.threads,
            out_path: self.out_path,
            format: self.format,
            emit_grid: self.emit_grid,
            lattice: self.lattice,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    /// Defaults for `command`, as if typed with no flags.
    pub fn defaults(command: Command) -> Self {
        Cli::try_parse_from(["amoeba-lab", command.name()])
            .expect("defaults parse")
            .resolve()
            .expect("defaults are valid")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.degree == 0 {
            return Err(usage("--degree must be >= 1"));
        }
        if self.command == Command::Bounds && self.degree < 2 {
            return Err(usage("bounds need --degree >= 2"));
        }
        if self.samples == 0 {
            return Err(usage("--samples must be positive"));
        }
        if self.command == Command::PPoint && self.samples < 100 {
            return Err(usage("p-point needs --samples >= 100"));
        }
        if !(self.window_t > 0.0 && self.window_t.is_finite()) {
            return Err(usage("--window must be positive"));
        }
        if self.theta_base < 16 || !self.theta_base.is_power_of_two() {
            return Err(usage("--theta-base must be a power of two >= 16"));
        }
        if self.grid < amoeba_core::chart::MIN_GRID {
            return Err(usage(format!("--grid must be >= {}", amoeba_core::chart::MIN_GRID)));
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return Err(usage("--kappa must lie in (0, 1]"));
        }
        if !(self.torus_x > 0.0 && self.torus_y > 0.0 && self.torus_x.is_finite() && self.torus_y.is_finite()) {
            return Err(usage("--torus radii must be positive"));
        }
        if self.lattice < 2 {
            return Err(usage("--lattice must be >= 2"));
        }
        if self.emit_grid.is_some() && self.command != Command::PPoint {
            return Err(usage("--emit-grid only applies to p-point"));
        }
        Ok(())
    }

    pub fn sweep(&self) -> amoeba_core::amoeba::SliceSweepConfig {
        amoeba_core::amoeba::SliceSweepConfig {
            n_theta_base: self.theta_base,
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<ExperimentConfig, String> {
        let mut v = vec!["amoeba-lab"];
        v.extend_from_slice(args);
        Cli::try_parse_from(v)
            .map_err(|e| e.to_string())?
            .resolve()
            .map_err(|e| e.to_string())
    }

    #[test]
    fn defaults() {
        let c = parse(&["multiarea"]).unwrap();
        assert_eq!(
            (c.degree, c.samples, c.theta_base, c.grid, c.seed, c.lattice),
            (2, 10_000, 16, 64, 7, 11)
        );
        assert!((c.window_t - (2f64.ln() + 4.0)).abs() < 1e-15);
        assert_eq!((c.torus_x, c.torus_y, c.kappa), (1.0, 1.0, 0.5));
        assert_eq!(c.format, Format::Json);
        assert_eq!(ExperimentConfig::defaults(Command::Multiarea), c);
    }

    #[test]
    fn flags() {
        let c = parse(&[
            "p-point", "--torus", "0.5,2", "--degree", "5", "--window", "3", "--format", "csv",
        ])
        .unwrap();
        assert_eq!((c.torus_x, c.torus_y, c.degree, c.window_t), (0.5, 2.0, 5, 3.0));
        assert_eq!(c.command, Command::PPoint);
    }

    #[test]
    fn rejects_bad_values() {
        for args in [
            &["area", "--degree", "0"][..],
            &["area", "--samples", "0"],
            &["p-point", "--samples", "50"],
            &["area", "--theta-base", "24"],
            &["charts", "--grid", "10"],
            &["charts", "--kappa", "1.5"],
            &["crofton", "--torus", "0,1"],
            &["crofton", "--torus", "1"],
            &["area", "--window", "-1"],
            &["area", "--emit-grid", "x.csv"],
            &["bounds", "--degree", "1"],
            &["nope"],
        ] {
            assert!(parse(args).is_err(), "{args:?}");
        }
    }
}
