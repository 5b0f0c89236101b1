use std::path::PathBuf;
use std::process::{Command as Proc, Output};

use amoeba_lab::error::{CliError, EXIT_HYPOTHESIS, EXIT_IO, EXIT_USAGE};
use amoeba_lab::report::{write_report, CSV_HEADER};
use amoeba_lab::{execute, Command, ExperimentConfig, Format, Report};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_amoeba-lab"))
        .args(args)
        .env_remove("AMOEBA_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn small(command: Command) -> ExperimentConfig {
    let mut c = ExperimentConfig::defaults(command);
    c.samples = 200;
    c.threads = 2;
    c
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn strip_volatile(mut v: Value) -> Value {
    let o = v.as_object_mut().unwrap();
    o.remove("timestamp");
    o.remove("wall_time_s");
    o["config"].as_object_mut().unwrap().remove("threads");
    v
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["bogus"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(bin(&["area", "--degree", "0"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(bin(&["area", "--samples", "x"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    let o = bin(&["bounds", "--out", "/nonexistent-dir/report.json"]);
    assert_eq!(o.status.code(), Some(EXIT_IO));
    assert!(!o.stderr.is_empty());
    let o = bin(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(
        CliError::from(amoeba_core::Error::SpacingViolated("x".into())).exit_code(),
        EXIT_HYPOTHESIS
    );
    assert_eq!(
        CliError::from(amoeba_core::Error::InvalidArgument("x".into())).exit_code(),
        EXIT_USAGE
    );
}

#[test]
fn every_command_matches_schema() {
    let v = schema();
    for cmd in [
        Command::Multiarea,
        Command::Area,
        Command::PPoint,
        Command::Crofton,
        Command::Bounds,
        Command::Charts,
        Command::Validate,
    ] {
        let rep = execute(&small(cmd)).unwrap();
        let j = serde_json::to_value(&rep).unwrap();
        let errs: Vec<String> = v.iter_errors(&j).map(|e| e.to_string()).collect();
        assert!(errs.is_empty(), "{cmd:?}: {errs:?}");
        let back: Report = serde_json::from_value(j).unwrap();
        assert_eq!(back, rep);
    }
}

#[test]
fn csv_round_trip() {
    let rep = execute(&small(Command::Crofton)).unwrap();
    let mut buf = Vec::new();
    write_report(&rep, Format::Csv, &mut buf).unwrap();
    let mut r = csv::Reader::from_reader(&buf[..]);
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), rep.metrics.len());
    for (row, m) in rows.iter().zip(&rep.metrics) {
        assert_eq!(&row[0], m.metric);
        assert_eq!(row[1].parse::<f64>().unwrap(), m.value);
        assert_eq!(row[2].parse::<f64>().ok(), m.stderr);
        assert_eq!(row[3].parse::<u64>().ok(), m.n);
        assert_eq!(row[4].parse::<f64>().ok(), m.tail_bound);
        assert_eq!((!row[5].is_empty()).then(|| row[5].to_string()), m.flag);
    }
}

#[test]
fn output_is_reproducible_across_runs_and_threads() {
    let args = ["multiarea", "--samples", "300", "--degree", "3"];
    let run = |threads: &str| {
        let o = Proc::new(env!("CARGO_BIN_EXE_amoeba-lab"))
            .args(args)
            .env("AMOEBA_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(
            v["config"]["threads"].as_u64().unwrap(),
            threads.parse::<u64>().unwrap()
        );
        serde_json::to_string(&strip_volatile(v)).unwrap()
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("4"));

    let mut c = small(Command::Charts);
    c.degree = 27;
    c.samples = 40;
    let one = execute(&ExperimentConfig {
        threads: 1,
        ..c.clone()
    })
    .unwrap();
    let many = execute(&ExperimentConfig { threads: 3, ..c }).unwrap();
    assert_eq!(one.without_volatile(), many.without_volatile());
}

#[test]
fn bounds_report_printed_values() {
    let o = bin(&["bounds", "--degree", "5"]);
    assert!(o.status.success());
    let rep: Report = serde_json::from_slice(&o.stdout).unwrap();
    let m = |k: &str| rep.metric(k).unwrap().value;
    assert!((m("expupper_tabulated") - 24.298).abs() < 5e-4);
    assert!(m("expupper") <= m("expupper_tabulated"));
    assert_eq!(m("global_bound"), m("multiarea_half"));
    assert!(rep.failed_checks().is_empty());
}

#[test]
fn file_output_and_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let grid = dir.path().join("g.csv");
    let o = bin(&[
        "p-point",
        "--samples",
        "100",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
        "--emit-grid",
        grid.to_str().unwrap(),
        "--lattice",
        "3",
        "--torus",
        "0.5,2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("metric,value,stderr,n,tail_bound,flag\n"));
    let mut r = csv::Reader::from_path(&grid).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["t1", "t2", "p", "stderr", "n", "bound"]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let (p, se, b): (f64, f64, f64) = (
            row[2].parse().unwrap(),
            row[3].parse().unwrap(),
            row[5].parse().unwrap(),
        );
        assert!(p <= b + 3.0 * se + 1e-12);
    }
}

#[test]
fn charts_report_is_vacuous() {
    let mut c = small(Command::Charts);
    c.degree = 4;
    let rep = execute(&c).unwrap();
    assert!(rep.vacuous_bound);
    assert_eq!(rep.metric("guarantee").unwrap().flag.as_deref(), Some("vacuous"));
    assert!(rep.metric("p_graph_chart_2").is_none());
}
