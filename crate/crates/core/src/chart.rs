//! Fubini-Study charts around a reference polynomial and the effective
//! criterion for a perturbation to stay a graph over the chart.
//!
//! A chart of degree `d` and capacity `kappa` centred at the origin is the
//! polydisc `D(0, 1/sqrt(6d)) x D(0, kappa/sqrt(6d))` in the affine chart
//! `Z = 1`. Charts elsewhere are images of that polydisc under a unitary
//! change of homogeneous coordinates.

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fs_geometry::fs_distance_homogeneous;
use crate::kostlan::{dim, fs_point_norm_sq_homogeneous, multi_indices, sample_poly, HomogeneousPoly, MultiIndex};
use crate::quadrature;
use crate::rng::RngStream;
use crate::roots::poly_roots;
use crate::stats::{chunked_map, mc_mean, EstimatorResult, CHUNK};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Relative width of the band around the vertical disc boundary inside which
/// a root makes the direct check indeterminate.
pub const GUARD_BAND: f64 = 1e-3;

/// Smallest Monte Carlo budget accepted for ball averages.
pub const MIN_BALL_SAMPLES: u64 = 1000;

/// Smallest grid accepted by [`direct_chart_check`].
pub const MIN_GRID: usize = 64;

/// `sqrt(d N_d) Y Z^{d-1}`, of unit FS norm.
pub fn reference_poly(d: usize) -> Result<HomogeneousPoly> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let c = ((d * dim(d)) as f64).sqrt();
    HomogeneousPoly::from_terms(d, &[(MultiIndex::new(d - 1, 0, 1), C::new(c, 0.0))])
}

/// Radius of the FS ball containing every degree-`d` chart, `arctan(2/sqrt d)`.
pub fn rho_d(d: usize) -> f64 {
    (2.0 / (d as f64).sqrt()).atan()
}

/// Horizontal radius `1/sqrt(6d)` of the chart polydisc.
pub fn horizontal_radius(d: usize) -> f64 {
    1.0 / (6.0 * d as f64).sqrt()
}

/// Vertical radius `kappa/sqrt(6d)` of the chart polydisc.
pub fn vertical_radius(d: usize, kappa: f64) -> f64 {
    kappa / (6.0 * d as f64).sqrt()
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("capacity {kappa} outside (0, 1]")))
    }
}

fn normalize3(w: [C; 3]) -> Result<[C; 3]> {
    let n = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(
            "homogeneous point must be nonzero and finite".into(),
        ));
    }
    Ok([w[0] / n, w[1] / n, w[2] / n])
}

/// A unitary matrix whose first column is `u / |u|`.
pub fn unitary_with_first_column(u: [C; 3]) -> Result<Matrix3<C>> {
    let u = normalize3(u)?;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| u[a].norm().total_cmp(&u[b].norm()));
    let mut cols: Vec<[C; 3]> = vec![u];
    for &k in order.iter() {
        if cols.len() == 3 {
            break;
        }
        let mut v = [ZERO; 3];
        v[k] = ONE;
        for c in &cols {
            let proj: C = (0..3).map(|i| c[i].conj() * v[i]).sum();
            for i in 0..3 {
                v[i] -= proj * c[i];
            }
        }
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push([v[0] / n, v[1] / n, v[2] / n]);
        }
    }
    Ok(Matrix3::from_fn(|i, j| cols[j][i]))
}

/// Random unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut RngStream) -> Matrix3<C> {
    loop {
        let g = Matrix3::from_fn(|_, _| rng.complex_gaussian());
        let qr = g.qr();
        let q = qr.q();
        if (q.adjoint() * q - Matrix3::identity()).norm() < 1e-12 {
            return q;
        }
    }
}

fn apply3(u: &Matrix3<C>, w: [C; 3]) -> [C; 3] {
    let v = u * nalgebra::Vector3::new(w[0], w[1], w[2]);
    [v[0], v[1], v[2]]
}

/// A degree-`d` marked FS chart of capacity `kappa`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedChart {
    pub d: usize,
    pub kappa: f64,
    /// Unit homogeneous representative of the centre.
    pub center: [C; 3],
    /// Unitary sending `[1:0:0]` to the centre.
    pub isometry: Matrix3<C>,
}

impl MarkedChart {
    pub fn new(d: usize, kappa: f64, center: [C; 3]) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        check_kappa(kappa)?;
        let center = normalize3(center)?;
        let isometry = unitary_with_first_column(center)?;
        let chart = MarkedChart {
            d,
            kappa,
            center,
            isometry,
        };
        chart.validate()?;
        Ok(chart)
    }

    /// Chart centred at the affine point `(z1, z2)`.
    pub fn at_affine(d: usize, kappa: f64, z: [C; 2]) -> Result<Self> {
        Self::new(d, kappa, [ONE, z[0], z[1]])
    }

    /// Standard chart at `[1:0:0]`.
    pub fn standard(d: usize, kappa: f64) -> Result<Self> {
        Self::new(d, kappa, [ONE, ZERO, ZERO])
    }

    pub fn validate(&self) -> Result<()> {
        check_kappa(self.kappa)?;
        let u = &self.isometry;
        let unitary_defect = (u.adjoint() * u - Matrix3::identity()).norm();
        let image = apply3(u, [ONE, ZERO, ZERO]);
        let overlap: C = (0..3).map(|i| self.center[i].conj() * image[i]).sum();
        if unitary_defect > 1e-12 || (1.0 - overlap.norm()).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "isometry is not unitary onto the centre (defects {unitary_defect:e}, {:e})",
                1.0 - overlap.norm()
            )));
        }
        Ok(())
    }

    /// Affine coordinates of the centre, `None` on the line at infinity.
    pub fn center_affine(&self) -> Option<[C; 2]> {
        let c = self.center;
        if c[0].norm() < 1e-300 {
            return None;
        }
        Some([c[1] / c[0], c[2] / c[0]])
    }
}

/// Linear map `P -> P o U` on the coefficient space of degree `d`.
#[derive(Clone, Debug)]
pub struct Translation {
    d: usize,
    matrix: DMatrix<C>,
}

impl Translation {
    /// `P o U`, where `U` acts on homogeneous coordinates `(Z, X, Y)`.
    pub fn new(d: usize, u: &Matrix3<C>) -> Self {
        let n = dim(d);
        // Linear form giving variable k of U w.
        let linear: Vec<HomogeneousPoly> = (0..3)
            .map(|k| {
                HomogeneousPoly::from_terms(
                    1,
                    &[
                        (MultiIndex::new(1, 0, 0), u[(k, 0)]),
                        (MultiIndex::new(0, 1, 0), u[(k, 1)]),
                        (MultiIndex::new(0, 0, 1), u[(k, 2)]),
                    ],
                )
                .expect("degree one")
            })
            .collect();
        let powers: Vec<Vec<HomogeneousPoly>> = linear
            .iter()
            .map(|l| {
                let mut out =
                    vec![HomogeneousPoly::from_terms(0, &[(MultiIndex::new(0, 0, 0), ONE)]).expect("constant")];
                for m in 1..=d {
                    let next = out[m - 1].mul(l);
                    out.push(next);
                }
                out
            })
            .collect();
        let mut matrix = DMatrix::from_element(n, n, ZERO);
        for (j, mi) in multi_indices(d).enumerate() {
            let image = powers[1][mi.i1].mul(&powers[2][mi.i2]).mul(&powers[0][mi.i0]);
            for (i, c) in image.coeffs().iter().enumerate() {
                matrix[(i, j)] = *c;
            }
        }
        Translation { d, matrix }
    }

    /// Map bringing the chart at `chart.center` back to the standard chart.
    pub fn for_chart(chart: &MarkedChart) -> Self {
        Self::new(chart.d, &chart.isometry)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn apply(&self, p: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if p.degree() != self.d {
            return Err(Error::InvalidArgument(format!(
                "polynomial has degree {}, map expects {}",
                p.degree(),
                self.d
            )));
        }
        let v = &self.matrix * DVector::from_column_slice(p.coeffs());
        HomogeneousPoly::from_coeffs(self.d, v.iter().copied().collect())
    }
}

/// Uniform point of the Euclidean ball of radius `r` in C^2.
fn uniform_in_ball(r: f64, rng: &mut RngStream) -> [C; 2] {
    let g = [rng.normal(), rng.normal(), rng.normal(), rng.normal()];
    let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s = r * rng.uniform().powf(0.25) / n;
    [C::new(g[0] * s, g[1] * s), C::new(g[2] * s, g[3] * s)]
}

/// FS-uniform point of `B_FS(0, rho)`, by rejection against the volume density.
pub fn sample_fs_ball(rho: f64, rng: &mut RngStream) -> [C; 2] {
    let r = rho.tan();
    loop {
        let z = uniform_in_ball(r, rng);
        let q = 1.0 + z[0].norm_sqr() + z[1].norm_sqr();
        if rng.uniform() * q * q * q < 1.0 {
            return z;
        }
    }
}

/// Average of `||Q(t)||^2_FS` over `B_FS(center, rho_d)` with `d = deg Q`.
pub fn ball_average_norm_sq(
    q: &HomogeneousPoly,
    center: [C; 3],
    n_mc: u64,
    rng: &RngStream,
) -> Result<EstimatorResult> {
    if n_mc < MIN_BALL_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_BALL_SAMPLES} samples, got {n_mc}"
        )));
    }
    let u = unitary_with_first_column(center)?;
    let rho = rho_d(q.degree().max(1));
    Ok(mc_mean(rng, n_mc, |r| {
        let z = sample_fs_ball(rho, r);
        fs_point_norm_sq_homogeneous(q, apply3(&u, [ONE, z[0], z[1]]))
    }))
}

/// `||P_d||^2` averaged over `B_FS(0, rho_d)`, by one-dimensional quadrature.
pub fn reference_ball_average(d: usize) -> f64 {
    let df = d as f64;
    let rho = rho_d(d);
    let s4 = rho.sin().powi(4);
    let f = |r: f64| r.powi(5) * (-(df + 3.0) * (r * r).ln_1p()).exp();
    let int = quadrature::integrate(f, 0.0, rho.tan(), 1e-16, 1e-13, 200).value;
    2.0 * df * dim(d) as f64 / s4 * int
}

/// Lower and upper bounds on `sin^4(rho_d) ||P_d||^2_{B_FS(0, rho_d)}`.
pub fn reference_ball_bounds(d: usize) -> (f64, f64) {
    let lower = (1.0 - 13.0 * (-4.0f64).exp()) / (1.0 + 4.0 / d as f64).powi(3);
    (lower, 1.0)
}

/// `c1(d) = 3^3 2^5 e^{4/3} (1 + 4/d)^3`.
pub fn c1(d: usize) -> f64 {
    c1_limit() * (1.0 + 4.0 / d as f64).powi(3)
}

pub fn c1_limit() -> f64 {
    27.0 * 32.0 * (4.0f64 / 3.0).exp()
}

/// `ln(1 - gamma(kappa)) = -2^11 3^3 / kappa^2 + ln(1 - e^{-1/2})`.
pub fn ln_one_minus_gamma(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(-2048.0 * 27.0 / (kappa * kappa) + (-(-0.5f64).exp()).ln_1p())
}

/// `ln gamma(kappa)`, rounding to `-0.0` whenever `1 - gamma` underflows.
pub fn ln_gamma(kappa: f64) -> Result<f64> {
    Ok((-ln_one_minus_gamma(kappa)?.exp()).ln_1p())
}

/// The guarantee `1 - 14 gamma^N` for `N` well-spaced charts, in log space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartBound {
    pub n: u64,
    pub ln_one_minus_gamma: f64,
    pub ln_gamma: f64,
    /// `1 - 14 gamma^N` at double precision.
    pub value: f64,
    /// The bound is <= 0 and says nothing.
    pub vacuous: bool,
    /// `ln` of the smallest `N` making the bound positive.
    pub ln_n_needed: f64,
}

pub fn chart_bound(kappa: f64, n: u64) -> Result<ChartBound> {
    let l1 = ln_one_minus_gamma(kappa)?;
    let lg = ln_gamma(kappa)?;
    let value = 1.0 - 14.0 * (n as f64 * lg).exp();
    // -ln gamma ~ e^{l1} once e^{l1} is tiny.
    let ln_neg_ln_gamma = if l1 < -30.0 { l1 } else { (-lg).ln() };
    Ok(ChartBound {
        n,
        ln_one_minus_gamma: l1,
        ln_gamma: lg,
        value,
        vacuous: !(value > 0.0),
        ln_n_needed: 14f64.ln().ln() - ln_neg_ln_gamma,
    })
}

/// Component of `q` orthogonal to `P_d`.
pub fn project_out(q: &HomogeneousPoly) -> Result<HomogeneousPoly> {
    let p = reference_poly(q.degree())?;
    let a = q.fs_inner(&p)?;
    q.add(&p.scale(-a))
}

/// Splits `p = a P_d + Q` with `Q` orthogonal to `P_d`.
pub fn split_reference(p: &HomogeneousPoly) -> Result<(C, HomogeneousPoly)> {
    let r = reference_poly(p.degree())?;
    let a = p.fs_inner(&r)?;
    Ok((a, p.add(&r.scale(-a))?))
}

/// Both sides of the sufficient condition `|a|^2 > c1/(kappa^2 N_d) ||Q||^2_B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub ball_average: EstimatorResult,
    pub holds: bool,
}

pub fn criterion(a: C, q: &HomogeneousPoly, kappa: f64, n_mc: u64, rng: &RngStream) -> Result<CriterionOutcome> {
    check_kappa(kappa)?;
    let d = q.degree();
    let q = project_out(q)?;
    let ball_average = if q.is_zero() {
        EstimatorResult {
            n: 0,
            mean: 0.0,
            stderr: 0.0,
            ci_low: 0.0,
            ci_high: 0.0,
        }
    } else {
        ball_average_norm_sq(&q, [ONE, ZERO, ZERO], n_mc, rng)?
    };
    let lhs = a.norm_sqr();
    let rhs = c1(d) / (kappa * kappa * dim(d) as f64) * ball_average.mean;
    Ok(CriterionOutcome {
        lhs,
        rhs,
        ball_average,
        holds: lhs > rhs,
    })
}

/// True when the standard chart is certified to be a graph chart of `a P_d + Q`.
pub fn criterion_holds(a: C, q: &HomogeneousPoly, kappa: f64, n_mc: u64, rng: &RngStream) -> Result<bool> {
    Ok(criterion(a, q, kappa, n_mc, rng)?.holds)
}

/// Outcome of the numerical graph test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartCheck {
    /// Exactly one root in every sampled vertical disc.
    Pass,
    Fail,
    /// A root fell in the guard band of the vertical boundary.
    Indeterminate,
}

/// Sample points of `D(0, r)`: the centre plus `k` rings of `k` points, the last on the boundary.
fn disc_grid(r: f64, n_grid: usize) -> Vec<C> {
    let k = (n_grid as f64).sqrt().ceil() as usize;
    let mut out = vec![ZERO];
    for ring in 1..=k {
        let rad = r * ring as f64 / k as f64;
        // Stagger rings so angles do not line up.
        let offset = 0.5 * ring as f64 / k as f64;
        for j in 0..k {
            out.push(C::from_polar(rad, 2.0 * PI * (j as f64 + offset) / k as f64));
        }
    }
    out
}

/// Checks on a grid of `z1` in `D(0, 1/sqrt(6d))` that `P(1, z1, .)` has exactly one
/// root of modulus below `kappa/sqrt(6d)`.
pub fn direct_chart_check(p: &HomogeneousPoly, kappa: f64, n_grid: usize) -> Result<ChartCheck> {
    check_kappa(kappa)?;
    if n_grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least {MIN_GRID} points"
        )));
    }
    let d = p.degree();
    if d == 0 {
        return Ok(ChartCheck::Fail);
    }
    let r2 = vertical_radius(d, kappa);
    let slicer = p.slicer();
    let mut c = vec![ZERO; d + 1];
    let mut warm: Option<Vec<C>> = None;
    let mut indeterminate = false;
    for z1 in disc_grid(horizontal_radius(d), n_grid) {
        slicer.slice(z1, &mut c);
        let roots = match poly_roots(&c, warm.as_deref()) {
            Ok(r) => r,
            Err(Error::DegenerateInput(_)) => return Ok(ChartCheck::Fail),
            Err(e) => return Err(e),
        };
        let mut inside = 0usize;
        let mut near = 0usize;
        for z in &roots.finite {
            let m = z.norm();
            if (m - r2).abs() <= GUARD_BAND * r2 {
                near += 1;
            } else if m < r2 {
                inside += 1;
            }
        }
        if inside > 1 || inside + near < 1 {
            return Ok(ChartCheck::Fail);
        }
        if near > 0 {
            indeterminate = true;
        }
        warm = if roots.at_infinity == 0 {
            Some(roots.finite)
        } else {
            None
        };
    }
    Ok(if indeterminate {
        ChartCheck::Indeterminate
    } else {
        ChartCheck::Pass
    })
}

/// [`direct_chart_check`] for the chart `Psi(B_d(kappa))`, via `P o Psi`.
pub fn chart_check_at(
    p: &HomogeneousPoly,
    chart: &MarkedChart,
    translation: &Translation,
    n_grid: usize,
) -> Result<ChartCheck> {
    if translation.degree() != chart.d {
        return Err(Error::InvalidArgument(
            "translation degree differs from chart degree".into(),
        ));
    }
    direct_chart_check(&translation.apply(p)?, chart.kappa, n_grid)
}

/// Minimum spacing `sqrt(20 ln d / d)` between chart centres.
pub fn min_center_spacing(d: usize) -> f64 {
    let df = d as f64;
    (20.0 * df.ln() / df).sqrt()
}

/// Smallest pairwise FS distance, `+inf` for fewer than two points.
pub fn min_pairwise_distance(centers: &[[C; 3]]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            m = m.min(fs_distance_homogeneous(centers[i], centers[j]));
        }
    }
    m
}

/// Coordinate points `[1:0:0], [0:1:0], [0:0:1]`, pairwise at distance `pi/2`.
pub fn coordinate_centers() -> Vec<[C; 3]> {
    vec![[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartExperimentReport {
    pub d: usize,
    pub kappa: f64,
    pub n_samples: u64,
    pub n_grid: usize,
    pub min_spacing: f64,
    pub required_spacing: f64,
    /// Frequency of "some chart passes" using the first `k + 1` centres.
    /// Indeterminate checks count as not passing.
    pub prefix_probability: Vec<EstimatorResult>,
    /// Samples with no pass and at least one indeterminate check, all centres.
    pub indeterminate: u64,
    pub probability: EstimatorResult,
    pub bound: ChartBound,
}

/// Frequency over Kostlan samples of "some chart centred in `centers` is a graph chart".
pub fn chart_probability_experiment(
    d: usize,
    kappa: f64,
    centers: &[[C; 3]],
    n_samples: u64,
    n_grid: usize,
    rng: &RngStream,
) -> Result<ChartExperimentReport> {
    if centers.is_empty() || n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one centre and one sample".into()));
    }
    let required = min_center_spacing(d);
    let spacing = min_pairwise_distance(centers);
    if spacing < required {
        return Err(Error::SpacingViolated(format!(
            "centres are {spacing:.6} apart, need {required:.6}"
        )));
    }
    let charts: Vec<MarkedChart> = centers
        .iter()
        .map(|c| MarkedChart::new(d, kappa, *c))
        .collect::<Result<_>>()?;
    let maps: Vec<Translation> = charts.iter().map(Translation::for_chart).collect();
    let k = charts.len();
    let parts = chunked_map(rng, n_samples, CHUNK.min(64), |r, count| -> Result<(Vec<u64>, u64)> {
        let mut passes = vec![0u64; k];
        let mut indet = 0u64;
        for _ in 0..count {
            let p = sample_poly(d, r);
            let mut passed = false;
            let mut unsure = false;
            for (i, (chart, map)) in charts.iter().zip(&maps).enumerate() {
                if !passed {
                    match chart_check_at(&p, chart, map, n_grid)? {
                        ChartCheck::Pass => passed = true,
                        ChartCheck::Indeterminate => unsure = true,
                        ChartCheck::Fail => {}
                    }
                }
                if passed {
                    passes[i] += 1;
                }
            }
            if !passed && unsure {
                indet += 1;
            }
        }
        Ok((passes, indet))
    });
    let mut passes = vec![0u64; k];
    let mut indeterminate = 0;
    for part in parts {
        let (p, i) = part?;
        for (a, b) in passes.iter_mut().zip(p) {
            *a += b;
        }
        indeterminate += i;
    }
    let prefix_probability: Vec<EstimatorResult> = passes
        .iter()
        .map(|&s| EstimatorResult::from_counts(s, n_samples))
        .collect();
    Ok(ChartExperimentReport {
        d,
        kappa,
        n_samples,
        n_grid,
        min_spacing: spacing,
        required_spacing: required,
        probability: *prefix_probability.last().expect("non-empty"),
        prefix_probability,
        indeterminate,
        bound: chart_bound(kappa, k as u64)?,
    })
}

/// `N = floor(2 delta sqrt d / (3 sqrt(5 ln d)))^2`, for `1 > delta >= 3 sqrt(5 ln d / d)`.
pub fn circle_chart_count(delta: f64, d: usize) -> Result<u64> {
    let df = d as f64;
    if d < 2 {
        return Err(Error::HypothesisViolated("degree must be >= 2".into()));
    }
    let lo = 3.0 * (5.0 * df.ln() / df).sqrt();
    // Relative slack so that delta = lo computed in floating point is admitted.
    if !(delta < 1.0 && delta >= lo * (1.0 - 1e-12)) {
        return Err(Error::HypothesisViolated(format!(
            "need 1 > delta >= {lo:.6}, got {delta}"
        )));
    }
    let x = 2.0 * delta * df.sqrt() / (3.0 * (5.0 * df.ln()).sqrt());
    let m = (x * (1.0 + 1e-12)).floor() as u64;
    Ok(m * m)
}

/// Lower bound `e^{-1/3} kappa^2 N_d / 6` on `||P_d||^2_FS` over the vertical boundary.
pub fn reference_boundary_lower(d: usize, kappa: f64) -> f64 {
    kappa * kappa * dim(d) as f64 * (-1.0f64 / 3.0).exp() / 6.0
}

/// `d N_d cos(dist)^{2(d-1)}`, the pointwise upper bound on `||P_d(z)||^2_FS`.
pub fn reference_pointwise_upper(d: usize, dist: f64) -> f64 {
    (d * dim(d)) as f64 * dist.cos().powi(2 * (d as i32 - 1))
}

/// `d N_d ((1 + cos dist)/2)^{d-1}`, bounding `|<P_d, P_d o Psi^{-1}>|` when `Psi(0)` is at `dist`.
pub fn reference_overlap_upper(d: usize, dist: f64) -> f64 {
    (d * dim(d)) as f64 * ((1.0 + dist.cos()) / 2.0).powi(d as i32 - 1)
}
