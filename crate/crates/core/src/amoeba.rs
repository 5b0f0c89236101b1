//! Membership of Log-tori in amoebas, intersection counts and Monte Carlo
//! estimates of the expected amoeba measures.
//!
//! A curve `V_P` meets the torus `|z1| = e^{t1}, |z2| = e^{t2}` exactly where a
//! root `z2(theta)` of the slice `P(1, e^{t1 + i theta}, .)` has modulus
//! `e^{t2}`. The sweep follows the roots around the circle and counts sign
//! changes of `g = ln|z2| - t2`; the total is the number of intersection points.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fs_geometry::{area_density, torus_area, LogPoint, TorusRadii, AREA_DENSITY_TOTAL};
use crate::kostlan::{sample_poly, HomogeneousPoly, Slicer};
use crate::quadrature::integrate;
use crate::rng::RngStream;
use crate::roots::{horner, horner_with_derivative, poly_roots};
use crate::stats::{chunked_map, wilson_interval, EstimatorResult, CHUNK, Z95};

type C = Complex64;

/// Angular resolution of the crossing sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSweepConfig {
    /// Initial number of equally spaced slices.
    pub n_theta_base: usize,
    /// Maximum number of bisections of one base interval.
    pub max_refinement_depth: u32,
    /// Relative distance of a root modulus to `e^{t2}` treated as "on the circle".
    pub circle_tolerance: f64,
}

impl Default for SliceSweepConfig {
    fn default() -> Self {
        SliceSweepConfig {
            n_theta_base: 16,
            max_refinement_depth: 12,
            circle_tolerance: 1e-6,
        }
    }
}

impl SliceSweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta_base < 16 || !self.n_theta_base.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "n_theta_base must be a power of two >= 16, got {}",
                self.n_theta_base
            )));
        }
        if self.max_refinement_depth > 30 {
            return Err(Error::InvalidArgument("max_refinement_depth must be <= 30".into()));
        }
        if !(self.circle_tolerance > 0.0 && self.circle_tolerance <= 1e-3) {
            return Err(Error::InvalidArgument(format!(
                "circle_tolerance must lie in (0, 1e-3], got {}",
                self.circle_tolerance
            )));
        }
        Ok(())
    }
}

/// Outcome of one sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Number of points of `V_P` on the torus; always even.
    pub crossing_count: u32,
    /// A root stayed inside the guard band at full resolution without crossing.
    pub flagged_tangency: bool,
}

impl MembershipVerdict {
    fn new(crossing_count: u32, flagged_tangency: bool) -> Self {
        MembershipVerdict {
            member: crossing_count >= 2 || flagged_tangency,
            crossing_count,
            flagged_tangency,
        }
    }
}

/// Moduli of the finite roots of `z2 -> P(1, e^{t1 + i theta1}, z2)` plus the
/// number of roots lost at infinity.
pub fn slice_root_moduli(p: &HomogeneousPoly, t1: f64, theta1: f64) -> Result<(Vec<f64>, usize)> {
    let z1 = C::from_polar(t1.exp(), theta1);
    let roots = poly_roots(&p.slice_in_z2(z1), None)?;
    Ok((roots.finite.iter().map(|r| r.norm()).collect(), roots.at_infinity))
}

/// Roots of one slice with `g = ln|r| - t2` and the angular log-velocity `w = r'/r`.
#[derive(Clone, Debug)]
struct SliceState {
    theta: f64,
    roots: Vec<C>,
    g: Vec<f64>,
    w: Vec<C>,
}

impl SliceState {
    fn v(&self, k: usize) -> f64 {
        self.w[k].re
    }
}

struct Sweep<'a> {
    slicer: &'a Slicer,
    x: f64,
    t2: f64,
    cfg: SliceSweepConfig,
    c: Vec<C>,
    dc: Vec<C>,
    dpoly: Vec<C>,
}

impl<'a> Sweep<'a> {
    fn new(slicer: &'a Slicer, t: LogPoint, cfg: SliceSweepConfig) -> Self {
        let n = slicer.degree() + 1;
        Sweep {
            slicer,
            x: t.t1.exp(),
            t2: t.t2,
            cfg,
            c: vec![C::new(0.0, 0.0); n],
            dc: vec![C::new(0.0, 0.0); n],
            dpoly: vec![C::new(0.0, 0.0); n.saturating_sub(1).max(1)],
        }
    }

    fn state(&mut self, theta: f64, warm: Option<&[C]>) -> Result<SliceState> {
        let z1 = C::from_polar(self.x, theta);
        self.slicer.slice_with_derivative(z1, &mut self.c, &mut self.dc);
        let roots = poly_roots(&self.c, warm)?.finite;
        let n = self.c.len();
        for k in 1..n {
            self.dpoly[k - 1] = self.c[k] * k as f64;
        }
        let dpoly = &self.dpoly[..n - 1];
        let iz1 = C::new(0.0, 1.0) * z1;
        let mut g = Vec::with_capacity(roots.len());
        let mut w = Vec::with_capacity(roots.len());
        for r in &roots {
            if r.norm() == 0.0 {
                g.push(f64::NEG_INFINITY);
                w.push(C::new(0.0, 0.0));
                continue;
            }
            let f1 = horner(&self.dc, *r);
            let f2 = horner(dpoly, *r);
            g.push(r.norm().ln() - self.t2);
            w.push(-(f1 * iz1) / (f2 * r));
        }
        Ok(SliceState { theta, roots, g, w })
    }

    /// Number of crossings on `[a, b]` and whether a tangency was flagged.
    fn interval(&mut self, a: &SliceState, b: &SliceState, depth: u32) -> Result<(u32, bool)> {
        let h = b.theta - a.theta;
        let tol = self.cfg.circle_tolerance;
        if let Some(pairs) = match_roots(a, b, h) {
            let at_max = depth >= self.cfg.max_refinement_depth;
            let mut count = 0;
            let mut flagged = false;
            let mut undecided = false;
            for &(i, j) in &pairs {
                let (ga, gb) = (a.g[i], b.g[j]);
                if ga == f64::NEG_INFINITY || gb == f64::NEG_INFINITY {
                    // Root at the origin; it never reaches a circle of positive radius.
                    continue;
                }
                let dg = gb - ga;
                let e = (dg - h * a.v(i)).abs() + (dg - h * b.v(j)).abs();
                let same_sign = (ga < 0.0) == (gb < 0.0);
                let low = ga.abs().min(gb.abs());
                // Both ends on the circle: the root may run along it.
                let hug = ga.abs().max(gb.abs()) < tol;
                if at_max {
                    if !same_sign {
                        count += 1;
                    }
                    if hug || (same_sign && low < tol && !(e < low)) {
                        flagged = true;
                    }
                } else if !e.is_finite() || hug {
                    undecided = true;
                    break;
                } else if same_sign && low > e {
                } else if !same_sign && e < 0.5 * dg.abs() {
                    count += 1;
                } else {
                    undecided = true;
                    break;
                }
            }
            if !undecided {
                return Ok((count, flagged));
            }
        } else if depth >= self.cfg.max_refinement_depth {
            // Unmatched at full resolution: keep the parity and flag if anything sits on the circle.
            let neg = |s: &SliceState| s.g.iter().filter(|g| **g < 0.0).count() as i64;
            let near = |s: &SliceState| s.g.iter().any(|g| g.abs() < tol);
            return Ok(((neg(a) - neg(b)).unsigned_abs() as u32, near(a) || near(b)));
        }
        let mid = 0.5 * (a.theta + b.theta);
        let warm: Vec<C> = a
            .roots
            .iter()
            .zip(&a.w)
            .map(|(r, w)| {
                let p = r * (w * (0.5 * h)).exp();
                if p.re.is_finite() && p.im.is_finite() {
                    p
                } else {
                    *r
                }
            })
            .collect();
        let m = self.state(mid, Some(&warm))?;
        let (c1, f1) = self.interval(a, &m, depth + 1)?;
        let (c2, f2) = self.interval(&m, b, depth + 1)?;
        Ok((c1 + c2, f1 || f2))
    }
}

/// Pairs roots of `a` with roots of `b` by first-order prediction. `None` when
/// the counts differ or some match is ambiguous.
fn match_roots(a: &SliceState, b: &SliceState, h: f64) -> Option<Vec<(usize, usize)>> {
    let n = a.roots.len();
    if b.roots.len() != n {
        return None;
    }
    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let ra = a.roots[i];
        let pred = if ra.norm() == 0.0 {
            ra
        } else {
            let p = ra * (a.w[i] * h).exp();
            if p.re.is_finite() && p.im.is_finite() {
                p
            } else {
                return None;
            }
        };
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, rb) in b.roots.iter().enumerate() {
            let dist = (pred - rb).norm();
            if dist < best.0 {
                second = best.0;
                best = (dist, j);
            } else if dist < second {
                second = dist;
            }
        }
        let j = best.1;
        if j == usize::MAX || used[j] {
            return None;
        }
        let exact_zero = ra.norm() == 0.0 && b.roots[j].norm() == 0.0;
        if !exact_zero && !(best.0 < 0.25 * second) {
            return None;
        }
        used[j] = true;
        pairs.push((i, j));
    }
    Some(pairs)
}

/// Counts the points of `V_P` on the torus `Log^{-1}(t)`.
pub fn torus_intersection_count(p: &HomogeneousPoly, t: LogPoint, cfg: &SliceSweepConfig) -> Result<MembershipVerdict> {
    cfg.validate()?;
    let slicer = p.slicer();
    torus_intersection_count_with(&slicer, t, cfg)
}

/// [`torus_intersection_count`] reusing a prepared [`Slicer`].
pub fn torus_intersection_count_with(
    slicer: &Slicer,
    t: LogPoint,
    cfg: &SliceSweepConfig,
) -> Result<MembershipVerdict> {
    let mut sweep = Sweep::new(slicer, t, *cfg);
    let n = cfg.n_theta_base;
    let h = TAU / n as f64;
    let first = sweep.state(0.0, None)?;
    let mut prev = first.clone();
    let mut total = 0;
    let mut flagged = false;
    for k in 1..=n {
        let warm: Vec<C> = prev
            .roots
            .iter()
            .zip(&prev.w)
            .map(|(r, w)| {
                let q = r * (w * h).exp();
                if q.re.is_finite() && q.im.is_finite() {
                    q
                } else {
                    *r
                }
            })
            .collect();
        let next = if k == n {
            // Same slice as theta = 0, relabelled at 2 pi.
            let mut s = first.clone();
            s.theta = TAU;
            s
        } else {
            sweep.state(k as f64 * h, Some(&warm))?
        };
        let (c, f) = sweep.interval(&prev, &next, 0)?;
        total += c;
        flagged |= f;
        prev = next;
    }
    assert!(total % 2 == 0, "odd crossing count {total}");
    Ok(MembershipVerdict::new(total, flagged))
}

/// Result of the brute-force grid oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseOracle {
    pub member: bool,
    /// Distinct zeros confirmed by Newton's method.
    pub zeros: u32,
}

/// Independent membership test: scans `|P|` on a `grid_n x grid_n` grid of the
/// torus, polishes every small local minimum with a 2D Newton iteration and
/// counts the distinct zeros found.
pub fn membership_oracle_dense(p: &HomogeneousPoly, t: LogPoint, grid_n: usize) -> Result<DenseOracle> {
    if grid_n < 256 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 256, got {grid_n}")));
    }
    let (x, y) = (t.t1.exp(), t.t2.exp());
    let d = p.degree();
    let slicer = p.slicer();
    let h = TAU / grid_n as f64;
    let mut c = vec![C::new(0.0, 0.0); d + 1];
    let mut dc = vec![C::new(0.0, 0.0); d + 1];
    let mut val = vec![0.0; grid_n * grid_n];
    let mut grad_max: f64 = 0.0;
    let circle2: Vec<C> = (0..grid_n).map(|j| C::from_polar(y, j as f64 * h)).collect();
    for i in 0..grid_n {
        let z1 = C::from_polar(x, i as f64 * h);
        slicer.slice_with_derivative(z1, &mut c, &mut dc);
        for (j, z2) in circle2.iter().enumerate() {
            let (f, f2) = horner_with_derivative(&c, *z2);
            let f1 = horner(&dc, *z2);
            val[i * grid_n + j] = f.norm();
            grad_max = grad_max.max((f1 * z1).norm().hypot((f2 * z2).norm()));
        }
    }
    // |f| is Lipschitz in (theta1, theta2) with constant about grad_max; a zero
    // inside a cell forces the value at the nearest grid point below this.
    let threshold = 2.0 * h * grad_max;
    let idx = |i: usize, j: usize| (i % grid_n) * grid_n + (j % grid_n);
    let mut zeros: Vec<(f64, f64)> = Vec::new();
    let scale = p.coeffs().iter().map(|a| a.norm()).fold(0.0, f64::max);
    for i in 0..grid_n {
        for j in 0..grid_n {
            let v = val[idx(i, j)];
            if v > threshold {
                continue;
            }
            let mut is_min = true;
            'nb: for di in [grid_n - 1, 0, 1] {
                for dj in [grid_n - 1, 0, 1] {
                    if (di, dj) == (0, 0) {
                        continue;
                    }
                    if val[idx(i + di, j + dj)] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if !is_min {
                continue;
            }
            if let Some(z) = newton_on_torus(&slicer, x, y, i as f64 * h, j as f64 * h, scale, &mut c, &mut dc) {
                let dup = zeros
                    .iter()
                    .any(|q| angle_gap(q.0, z.0) < 1e-7 && angle_gap(q.1, z.1) < 1e-7);
                if !dup {
                    zeros.push(z);
                }
            }
        }
    }
    Ok(DenseOracle {
        member: !zeros.is_empty(),
        zeros: zeros.len() as u32,
    })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[allow(clippy::too_many_arguments)]
fn newton_on_torus(
    slicer: &Slicer,
    x: f64,
    y: f64,
    mut th1: f64,
    mut th2: f64,
    scale: f64,
    c: &mut [C],
    dc: &mut [C],
) -> Option<(f64, f64)> {
    let i = C::new(0.0, 1.0);
    for _ in 0..40 {
        let z1 = C::from_polar(x, th1);
        let z2 = C::from_polar(y, th2);
        slicer.slice_with_derivative(z1, c, dc);
        let (f, f2) = horner_with_derivative(c, z2);
        let f1 = horner(dc, z2);
        let mag = 1.0 + x.max(y).powi(slicer.degree() as i32);
        if f.norm() <= 1e-12 * scale * mag {
            return Some((th1.rem_euclid(TAU), th2.rem_euclid(TAU)));
        }
        // Real Jacobian of (Re f, Im f) in (theta1, theta2).
        let a = i * z1 * f1;
        let b = i * z2 * f2;
        let det = a.re * b.im - a.im * b.re;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let d1 = (f.re * b.im - f.im * b.re) / det;
        let d2 = (a.re * f.im - a.im * f.re) / det;
        th1 -= d1.clamp(-0.1, 0.1);
        th2 -= d2.clamp(-0.1, 0.1);
    }
    None
}

/// The order-three toric symmetry `psi(t1, t2) = (-t2, t1 - t2)`.
pub fn psi(t: LogPoint) -> LogPoint {
    LogPoint::new(-t.t2, t.t1 - t.t2)
}

/// Default half-width of the sampling window, `ln d + 4`.
pub fn default_window(d: usize) -> f64 {
    (d as f64).ln() + 4.0
}

/// `int_{[-T,T]^2} a(t) dt`, reduced to one dimension by the closed-form inner integral.
pub fn box_area_density_integral(window: f64) -> f64 {
    let x_hi = window.exp();
    let x_lo = (-window).exp();
    let inner = |u: f64| {
        let y = u.exp();
        let y2 = y * y;
        let s = 4.0 * PI * PI * y / (1.0 + y2);
        s * (x_hi / (1.0 + x_hi * x_hi + y2).sqrt() - x_lo / (1.0 + x_lo * x_lo + y2).sqrt())
    };
    integrate(inner, -window, window, 1e-13, 1e-14, 2000).value
}

/// `int_{outside [-T,T]^2} a(t) dt`.
pub fn outside_area_density_integral(window: f64) -> f64 {
    (AREA_DENSITY_TOTAL - box_area_density_integral(window)).max(0.0)
}

/// Expected multiarea outside the window, `(d/2 pi) int_outside a`.
pub fn multiarea_tail(d: usize, window: f64) -> f64 {
    d as f64 / TAU * outside_area_density_integral(window)
}

/// Upper bound `(d/4 pi) int_outside a >= int_outside min(1, d a/4 pi)` on the area outside the window.
pub fn area_tail_bound(d: usize, window: f64) -> f64 {
    d as f64 / (2.0 * TAU) * outside_area_density_integral(window)
}

/// `d a(t) / (4 pi)` capped at 1, the pointwise upper bound on `p(t)`.
pub fn p_upper_bound(d: usize, t: LogPoint) -> f64 {
    (d as f64 * area_density(t) / (2.0 * TAU)).min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Area,
    Multiarea,
    PointwiseP,
}

/// A Monte Carlo estimate of an amoeba measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmoebaMeasureEstimate {
    pub kind: MeasureKind,
    /// Window estimate plus the tail term.
    pub value: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Samples that entered the mean.
    pub n_samples: u64,
    /// Samples excluded for a flagged tangency.
    pub n_flagged: u64,
    /// Samples rejected for an identically vanishing slice.
    pub n_rejected: u64,
    /// Mass outside the window: exact for the multiarea, an upper bound for the area.
    pub tail_bound: f64,
    pub window: Option<f64>,
}

/// Integer tallies over a batch of sweeps; merging is exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTally {
    pub valid: u64,
    pub flagged: u64,
    pub rejected: u64,
    pub members: u64,
    pub count_sum: u64,
    pub count_sq_sum: u64,
}

impl SweepTally {
    pub fn add(&mut self, v: Result<MembershipVerdict>) -> Result<()> {
        match v {
            Ok(v) if v.flagged_tangency => self.flagged += 1,
            Ok(v) => {
                self.valid += 1;
                self.members += u64::from(v.member);
                let c = u64::from(v.crossing_count);
                self.count_sum += c;
                self.count_sq_sum += c * c;
            }
            Err(Error::DegenerateInput(_)) => self.rejected += 1,
            Err(e) => return Err(e),
        }
        Ok(())
    }

    pub fn merge(&mut self, o: &SweepTally) {
        self.valid += o.valid;
        self.flagged += o.flagged;
        self.rejected += o.rejected;
        self.members += o.members;
        self.count_sum += o.count_sum;
        self.count_sq_sum += o.count_sq_sum;
    }

    /// Mean crossing count over valid samples.
    pub fn count_estimate(&self) -> EstimatorResult {
        let n = self.valid as f64;
        let mean = self.count_sum as f64 / n;
        let var = if self.valid > 1 {
            ((self.count_sq_sum as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let se = (var / n).sqrt();
        EstimatorResult {
            n: self.valid,
            mean,
            stderr: se,
            ci_low: mean - Z95 * se,
            ci_high: mean + Z95 * se,
        }
    }

    pub fn membership_estimate(&self) -> EstimatorResult {
        EstimatorResult::from_counts(self.members, self.valid)
    }
}

fn run_tally<F>(n_samples: u64, rng: &RngStream, task: F) -> Result<SweepTally>
where
    F: Fn(&mut RngStream) -> Result<MembershipVerdict> + Sync + Send,
{
    let parts = chunked_map(rng, n_samples, CHUNK / 4, |r, count| {
        let mut tally = SweepTally::default();
        for _ in 0..count {
            tally.add(task(r))?;
        }
        Ok(tally)
    });
    let mut total = SweepTally::default();
    for p in parts {
        total.merge(&p?);
    }
    if total.valid == 0 {
        return Err(Error::Inconclusive("every sample was flagged or rejected".into()));
    }
    Ok(total)
}

/// Tallies sweeps of fresh Kostlan polynomials at a fixed `t`.
pub fn tally_at_point(
    d: usize,
    t: LogPoint,
    n_samples: u64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<SweepTally> {
    cfg.validate()?;
    run_tally(n_samples, rng, |r| {
        let p = sample_poly(d, r);
        torus_intersection_count(&p, t, cfg)
    })
}

/// Tallies sweeps at `t` uniform on `[-T, T]^2`, one fresh polynomial per sample.
pub fn tally_in_window(
    d: usize,
    window: f64,
    n_samples: u64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<SweepTally> {
    cfg.validate()?;
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidArgument(format!("window must be positive, got {window}")));
    }
    run_tally(n_samples, rng, |r| {
        let t = LogPoint::new(r.uniform_in(-window, window), r.uniform_in(-window, window));
        let p = sample_poly(d, r);
        torus_intersection_count(&p, t, cfg)
    })
}

/// `P(t in A(P))` with a Wilson interval; flagged samples are excluded.
pub fn estimate_p(
    t: LogPoint,
    d: usize,
    n_samples: u64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<AmoebaMeasureEstimate> {
    if n_samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 samples, got {n_samples}"
        )));
    }
    let tally = tally_at_point(d, t, n_samples, cfg, rng)?;
    let e = tally.membership_estimate();
    let (lo, hi) = wilson_interval(tally.members, tally.valid, Z95);
    Ok(AmoebaMeasureEstimate {
        kind: MeasureKind::PointwiseP,
        value: e.mean,
        stderr: e.stderr,
        ci_low: lo,
        ci_high: hi,
        n_samples: tally.valid,
        n_flagged: tally.flagged,
        n_rejected: tally.rejected,
        tail_bound: 0.0,
        window: None,
    })
}

fn window_estimate(kind: MeasureKind, tally: &SweepTally, window: f64, d: usize) -> AmoebaMeasureEstimate {
    let area = (2.0 * window).powi(2);
    let (e, tail) = match kind {
        MeasureKind::Multiarea => (tally.count_estimate(), multiarea_tail(d, window)),
        _ => (tally.membership_estimate(), area_tail_bound(d, window)),
    };
    let e = e.scaled(area);
    AmoebaMeasureEstimate {
        kind,
        value: e.mean + tail,
        stderr: e.stderr,
        ci_low: e.ci_low + tail,
        ci_high: e.ci_high + tail,
        n_samples: tally.valid,
        n_flagged: tally.flagged,
        n_rejected: tally.rejected,
        tail_bound: tail,
        window: Some(window),
    }
}

/// Expected multiarea `E_d(Mvol(A))`: mean crossing count times the window area plus the exact tail.
pub fn estimate_multiarea(
    d: usize,
    n_samples: u64,
    window: f64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<AmoebaMeasureEstimate> {
    let tally = tally_in_window(d, window, n_samples, cfg, rng)?;
    Ok(window_estimate(MeasureKind::Multiarea, &tally, window, d))
}

/// Expected area `E_d(Vol(A))`: membership frequency times the window area plus the tail bound.
pub fn estimate_area(
    d: usize,
    n_samples: u64,
    window: f64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<AmoebaMeasureEstimate> {
    let tally = tally_in_window(d, window, n_samples, cfg, rng)?;
    Ok(window_estimate(MeasureKind::Area, &tally, window, d))
}

/// Both window estimates from one shared set of samples.
pub fn estimate_area_and_multiarea(
    d: usize,
    n_samples: u64,
    window: f64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<(AmoebaMeasureEstimate, AmoebaMeasureEstimate)> {
    let tally = tally_in_window(d, window, n_samples, cfg, rng)?;
    Ok((
        window_estimate(MeasureKind::Area, &tally, window, d),
        window_estimate(MeasureKind::Multiarea, &tally, window, d),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CroftonReport {
    pub radii: TorusRadii,
    /// `(d / 2 pi) A(x, y)`.
    pub expected: f64,
    pub estimate: EstimatorResult,
    pub n_flagged: u64,
    pub agrees: bool,
}

/// Mean intersection count with a fixed torus against `(d/2 pi)` times its area.
pub fn crofton_check(
    d: usize,
    r: TorusRadii,
    n_samples: u64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<CroftonReport> {
    let tally = tally_at_point(d, r.log_point(), n_samples, cfg, rng)?;
    let expected = d as f64 / TAU * torus_area(r);
    let estimate = tally.count_estimate();
    Ok(CroftonReport {
        radii: r,
        expected,
        estimate,
        n_flagged: tally.flagged,
        agrees: estimate.agrees_with(expected, 3.0, 0.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub t: LogPoint,
    pub psi_t: LogPoint,
    pub p_t: EstimatorResult,
    pub p_psi_t: EstimatorResult,
    pub combined_stderr: f64,
    pub holds: bool,
}

/// Compares `p(t)` with `p(psi(t))` on independent samples.
pub fn toric_symmetry_check(
    d: usize,
    t: LogPoint,
    n_samples: u64,
    cfg: &SliceSweepConfig,
    rng: &RngStream,
) -> Result<SymmetryReport> {
    let pt = psi(t);
    let a = tally_at_point(d, t, n_samples, cfg, &rng.substream(0))?.membership_estimate();
    let b = tally_at_point(d, pt, n_samples, cfg, &rng.substream(1))?.membership_estimate();
    let se = a.stderr.hypot(b.stderr);
    // A floor of one sample's worth keeps p = 0 or 1 on both sides from failing on a zero stderr.
    let slack = 3.0 * se + 1.0 / n_samples as f64;
    Ok(SymmetryReport {
        t,
        psi_t: pt,
        p_t: a,
        p_psi_t: b,
        combined_stderr: se,
        holds: (a.mean - b.mean).abs() <= slack,
    })
}
