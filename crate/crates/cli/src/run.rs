use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use amoeba_core::amoeba::{
    crofton_check, estimate_area, estimate_multiarea, estimate_p, p_upper_bound, AmoebaMeasureEstimate,
};
use amoeba_core::bounds::{asymptotic_law, bound_report, expupper_bound, global_bound, published_brackets};
use amoeba_core::chart::{chart_probability_experiment, circle_chart_count, coordinate_centers, min_center_spacing};
use amoeba_core::{LogPoint, RngStream, TorusRadii};
use serde_json::json;

use crate::config::{Command, ExperimentConfig};
use crate::error::CliError;
use crate::report::{Metric, Report};
use crate::validate;

pub const TOOL: &str = "amoeba-lab";
pub const VERSION: &str = env!("AMOEBA_LAB_VERSION");

/// Body of a report before the run metadata is attached.
pub struct Findings {
    pub target: Option<f64>,
    pub vacuous_bound: bool,
    pub metrics: Vec<Metric>,
    pub details: serde_json::Value,
}

/// Runs `cfg` in a pool of `cfg.threads` workers and assembles the report.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let findings = pool.install(|| dispatch(cfg))?;
    Ok(Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: cfg.command.name().into(),
        target: findings.target,
        vacuous_bound: findings.vacuous_bound,
        metrics: findings.metrics,
        details: findings.details,
        config: cfg.clone(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Findings, CliError> {
    let rng = RngStream::new(cfg.seed, 0);
    match cfg.command {
        Command::Multiarea => multiarea(cfg, &rng),
        Command::Area => area(cfg, &rng),
        Command::PPoint => p_point(cfg, &rng),
        Command::Crofton => crofton(cfg, &rng),
        Command::Bounds => bounds(cfg),
        Command::Charts => charts(cfg, &rng),
        Command::Validate => validate::run(cfg, &rng),
    }
}

fn estimate_metric(name: &str, e: &AmoebaMeasureEstimate) -> Metric {
    Metric::estimate(name, e.value, e.stderr, e.n_samples).tail(e.tail_bound)
}

fn sample_counts(e: &AmoebaMeasureEstimate) -> [Metric; 2] {
    [
        Metric::value("flagged_samples", e.n_flagged as f64),
        Metric::value("rejected_samples", e.n_rejected as f64),
    ]
}

/// Omitted when the standard error vanishes.
fn z_score(diff: f64, stderr: f64) -> Option<Metric> {
    (stderr > 0.0).then(|| Metric::value("z_score", diff / stderr))
}

fn multiarea(cfg: &ExperimentConfig, rng: &RngStream) -> Result<Findings, CliError> {
    let e = estimate_multiarea(cfg.degree, cfg.samples, cfg.window_t, &cfg.sweep(), rng)?;
    let target = PI * PI * cfg.degree as f64;
    let mut metrics = vec![estimate_metric("multiarea", &e), Metric::value("target", target)];
    metrics.extend(z_score(e.value - target, e.stderr));
    metrics.extend(sample_counts(&e));
    Ok(Findings {
        target: Some(target),
        vacuous_bound: false,
        metrics,
        details: json!({ "estimate": e }),
    })
}

fn area(cfg: &ExperimentConfig, rng: &RngStream) -> Result<Findings, CliError> {
    let d = cfg.degree;
    let e = estimate_area(d, cfg.samples, cfg.window_t, &cfg.sweep(), rng)?;
    let global = global_bound(d as f64)?;
    let mut metrics = vec![estimate_metric("area", &e), Metric::value("global_bound", global)];
    let mut upper = global;
    if d >= 2 {
        let ex = expupper_bound(d as f64)?;
        metrics.push(Metric::value("expupper", ex));
        upper = upper.min(ex);
    }
    // Estimate and tail overshoot only in the upward direction.
    metrics.push(Metric::check(
        "below_upper_bound",
        e.value - 3.0 * e.stderr - upper,
        e.value - 3.0 * e.stderr <= upper,
    ));
    metrics.extend(sample_counts(&e));
    Ok(Findings {
        target: None,
        vacuous_bound: false,
        metrics,
        details: json!({ "estimate": e, "upper_bound": upper }),
    })
}

fn p_point(cfg: &ExperimentConfig, rng: &RngStream) -> Result<Findings, CliError> {
    let d = cfg.degree;
    let t = TorusRadii::new(cfg.torus_x, cfg.torus_y)?.log_point();
    let e = estimate_p(t, d, cfg.samples, &cfg.sweep(), rng)?;
    let bound = p_upper_bound(d, t);
    let ok = e.value <= bound + 3.0 * e.stderr;
    let mut metrics = vec![
        Metric::estimate("p", e.value, e.stderr, e.n_samples),
        Metric::value("p_upper_bound", bound),
        Metric::check("below_density_bound", e.value - bound, ok),
    ];
    metrics.extend(sample_counts(&e));
    if let Some(path) = &cfg.emit_grid {
        write_lattice(cfg, path)?;
    }
    Ok(Findings {
        target: None,
        vacuous_bound: bound >= 1.0,
        metrics,
        details: json!({ "t": t, "estimate": e }),
    })
}

/// `p` on a `lattice x lattice` grid of the window, one row per point.
fn write_lattice(cfg: &ExperimentConfig, path: &Path) -> Result<(), CliError> {
    let n = cfg.lattice;
    let w = cfg.window_t;
    let step = 2.0 * w / (n - 1) as f64;
    let base = RngStream::new(cfg.seed, 1);
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let t = LogPoint::new(-w + step * i as f64, -w + step * j as f64);
            let e = estimate_p(
                t,
                cfg.degree,
                cfg.samples,
                &cfg.sweep(),
                &base.substream((i * n + j) as u64),
            )?;
            rows.push((t, e, p_upper_bound(cfg.degree, t)));
        }
    }
    let f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = csv::Writer::from_writer(std::io::BufWriter::new(f));
    out.write_record(["t1", "t2", "p", "stderr", "n", "bound"])?;
    for (t, e, b) in rows {
        out.write_record([
            t.t1.to_string(),
            t.t2.to_string(),
            e.value.to_string(),
            e.stderr.to_string(),
            e.n_samples.to_string(),
            b.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn crofton(cfg: &ExperimentConfig, rng: &RngStream) -> Result<Findings, CliError> {
    let r = TorusRadii::new(cfg.torus_x, cfg.torus_y)?;
    let rep = crofton_check(cfg.degree, r, cfg.samples, &cfg.sweep(), rng)?;
    let mut metrics = vec![
        Metric::estimate(
            "mean_intersections",
            rep.estimate.mean,
            rep.estimate.stderr,
            rep.estimate.n,
        ),
        Metric::value("expected", rep.expected),
        Metric::value("flagged_samples", rep.n_flagged as f64),
    ];
    metrics.extend(z_score(rep.estimate.mean - rep.expected, rep.estimate.stderr));
    Ok(Findings {
        target: Some(rep.expected),
        vacuous_bound: false,
        metrics,
        details: json!({ "crofton": rep }),
    })
}

fn bounds(cfg: &ExperimentConfig) -> Result<Findings, CliError> {
    let d = cfg.degree as u64;
    let b = bound_report(d)?;
    let mut metrics = vec![
        Metric::value("rho0_sq", b.rho0_sq),
        Metric::value("rho1_sq", b.rho1_sq),
        Metric::value("truncated_integral", b.integral_value),
        Metric::value("expupper", b.expupper_value),
        Metric::value("mainbound", b.mainbound_value),
        Metric::value("upperboundall", b.upperboundall_value),
        Metric::value("multiarea_half", b.multiarea_half),
        Metric::value("global_bound", b.global_bound),
        Metric::value("asymptotic_residual", b.integral_value - asymptotic_law(d as f64)),
    ];
    if let Some(t) = b.expupper_tabulated {
        metrics.push(Metric::value("expupper_tabulated", t));
    }
    if let Some(br) = published_brackets(d) {
        metrics.push(Metric::check(
            "rho0_sq_in_table",
            b.rho0_sq,
            br.rho0_sq.contains(b.rho0_sq),
        ));
        metrics.push(Metric::check(
            "rho1_sq_in_table",
            b.rho1_sq,
            br.rho1_sq.contains(b.rho1_sq),
        ));
    }
    Ok(Findings {
        target: None,
        vacuous_bound: false,
        metrics,
        details: json!({ "bounds": b }),
    })
}

fn charts(cfg: &ExperimentConfig, rng: &RngStream) -> Result<Findings, CliError> {
    let d = cfg.degree;
    let all = coordinate_centers();
    // Several centres only once the mutual spacing requirement allows them.
    let centers = if min_center_spacing(d) <= std::f64::consts::FRAC_PI_2 {
        &all[..]
    } else {
        &all[..1]
    };
    let rep = chart_probability_experiment(d, cfg.kappa, centers, cfg.samples, cfg.grid, rng)?;
    let mut metrics: Vec<Metric> = rep
        .prefix_probability
        .iter()
        .enumerate()
        .map(|(k, p)| Metric::estimate(&format!("p_graph_chart_{}", k + 1), p.mean, p.stderr, p.n))
        .collect();
    metrics.push(Metric::value("indeterminate_samples", rep.indeterminate as f64));
    metrics.push(Metric::value("guarantee", rep.bound.value).flag(if rep.bound.vacuous { "vacuous" } else { "ok" }));
    metrics.push(Metric::value("ln_one_minus_gamma", rep.bound.ln_one_minus_gamma));
    metrics.push(Metric::value("ln_charts_needed", rep.bound.ln_n_needed));
    let n_for_half = circle_chart_count(0.5, d).ok();
    if let Some(n) = n_for_half {
        metrics.push(Metric::value("charts_at_half_spacing", n as f64));
    }
    Ok(Findings {
        target: None,
        vacuous_bound: rep.bound.vacuous,
        metrics,
        details: json!({ "experiment": rep, "charts_at_half_spacing": n_for_half }),
    })
}

/// Writes the report, then returns the process exit code.
pub fn finish(report: &Report, cfg: &ExperimentConfig) -> Result<i32, CliError> {
    crate::report::emit_report(report, cfg.out_path.as_deref(), cfg.format)?;
    if cfg.command == Command::Validate && !report.failed_checks().is_empty() {
        let _ = writeln!(
            std::io::stderr(),
            "{} validation check(s) failed",
            report.failed_checks().len()
        );
        return Ok(crate::error::EXIT_FAILED);
    }
    Ok(crate::error::EXIT_OK)
}
