//! Bergman kernel, covariance matrices of point evaluations and the Gaussian
//! tail and conditional-expectation bounds built on them.
//!
//! Every probability bound is evaluated in log space and returned unclipped;
//! [`BoundValue::vacuous`] says when it carries no information.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kostlan::{dim, sample_poly, HomogeneousPoly};
use crate::rng::RngStream;
use crate::stats::{chunked_map, EstimatorResult, Moments, CHUNK};

type C = Complex64;

/// Relative tolerance for Hermitian symmetry and positivity at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian positive-definite matrix with cached spectrum.
#[derive(Clone, Debug)]
pub struct CovarianceMatrix {
    m: DMatrix<C>,
    /// Ascending eigenvalues.
    eig: Vec<f64>,
    chol: DMatrix<C>,
}

impl CovarianceMatrix {
    /// Validates and stores `m`. The strictly lower triangle is replaced by the
    /// conjugate of the upper one so that symmetry is exact.
    pub fn new(m: DMatrix<C>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "covariance must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !scale.is_finite() || scale == 0.0 {
            return Err(Error::InvalidArgument(
                "covariance entries must be finite and not all zero".into(),
            ));
        }
        let mut h = m;
        for i in 0..n {
            for j in 0..i {
                let gap = (h[(i, j)] - h[(j, i)].conj()).norm();
                if gap > HERMITIAN_TOL * scale {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not Hermitian: entry ({i},{j}) off by {gap:e}"
                    )));
                }
                h[(i, j)] = h[(j, i)].conj();
            }
            if h[(i, i)].im.abs() > HERMITIAN_TOL * scale {
                return Err(Error::InvalidArgument(format!("diagonal entry {i} is not real")));
            }
            h[(i, i)].im = 0.0;
        }
        let mut eig: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        if !(eig[0] > HERMITIAN_TOL * eig[n - 1]) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not positive definite: smallest eigenvalue {:e}",
                eig[0]
            )));
        }
        let chol = Cholesky::new(h.clone())
            .ok_or_else(|| Error::InvalidArgument("Cholesky factorization failed".into()))?
            .unpack();
        Ok(CovarianceMatrix { m: h, eig, chol })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is positive definite")
    }

    /// Real symmetric convenience constructor from row-major data.
    pub fn from_real_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                n * n,
                rows.len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| C::new(rows[i * n + j], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.m
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig
    }

    /// Operator norm `||C||`, the largest eigenvalue.
    pub fn op_norm(&self) -> f64 {
        *self.eig.last().expect("non-empty")
    }

    /// Entrywise sup norm `||C||_inf`.
    pub fn inf_norm(&self) -> f64 {
        self.m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `||C^{-1}||`, the reciprocal of the smallest eigenvalue.
    pub fn inverse_op_norm(&self) -> f64 {
        1.0 / self.eig[0]
    }

    /// `||C|| ||C^{-1}||`.
    pub fn condition(&self) -> f64 {
        self.op_norm() * self.inverse_op_norm()
    }

    pub fn ln_det(&self) -> f64 {
        self.eig.iter().map(|e| e.ln()).sum()
    }

    pub fn det(&self) -> f64 {
        self.ln_det().exp()
    }

    /// `||C - I||`.
    pub fn distance_to_identity(&self) -> f64 {
        self.eig.iter().map(|e| (e - 1.0).abs()).fold(0.0, f64::max)
    }

    /// `(1/(1-c), c/(1-c))` with `c = ||C - I||`: bounds on `||C^{-1}||` and `||C^{-1} - I||`.
    pub fn inverse_bounds(&self) -> Result<(f64, f64)> {
        let c = self.distance_to_identity();
        if c >= 1.0 {
            return Err(Error::HypothesisViolated(format!("||C - I|| = {c} is not < 1")));
        }
        Ok((1.0 / (1.0 - c), c / (1.0 - c)))
    }

    pub fn inverse(&self) -> CovarianceMatrix {
        let li = self
            .chol
            .clone()
            .try_inverse()
            .expect("Cholesky factor of a positive definite matrix is invertible");
        CovarianceMatrix::new(li.adjoint() * li).expect("inverse of a positive definite matrix")
    }

    /// `D^{-1/2} C D^{-1/2}` with `D` the diagonal: the correlation matrix.
    pub fn normalized(&self) -> CovarianceMatrix {
        let n = self.dim();
        let s: Vec<f64> = (0..n).map(|i| self.m[(i, i)].re.sqrt()).collect();
        let mut c = DMatrix::from_fn(n, n, |i, j| self.m[(i, j)] / (s[i] * s[j]));
        for i in 0..n {
            c[(i, i)] = C::new(1.0, 0.0);
        }
        CovarianceMatrix::new(c).expect("correlation of a positive definite matrix")
    }

    /// True when some diagonal entry equals 1 to within the construction tolerance.
    pub fn has_unit_diagonal_entry(&self) -> bool {
        (0..self.dim()).any(|i| (self.m[(i, i)].re - 1.0).abs() <= HERMITIAN_TOL)
    }

    /// The principal submatrix on `indices`.
    pub fn principal(&self, indices: &[usize]) -> Result<CovarianceMatrix> {
        if indices.is_empty() || indices.iter().any(|&i| i >= self.dim()) {
            return Err(Error::InvalidArgument(format!("bad index set {indices:?}")));
        }
        let k = indices.len();
        Self::new(DMatrix::from_fn(k, k, |a, b| self.m[(indices[a], indices[b])]))
    }

    /// Lower Cholesky factor `L` with `C = L L*`.
    pub fn cholesky(&self) -> &DMatrix<C> {
        &self.chol
    }

    /// One draw of `Z ~ N_C(0, C)`.
    pub fn sample(&self, rng: &mut RngStream) -> Vec<C> {
        let n = self.dim();
        let a: Vec<C> = (0..n).map(|_| rng.complex_gaussian()).collect();
        (0..n)
            .map(|i| (0..=i).map(|j| self.chol[(i, j)] * a[j]).sum())
            .collect()
    }
}

/// The law `N_C^N(0, B)`.
#[derive(Clone, Debug)]
pub struct GaussianVectorSpec {
    pub covariance: CovarianceMatrix,
}

impl GaussianVectorSpec {
    pub fn new(covariance: CovarianceMatrix) -> Self {
        GaussianVectorSpec { covariance }
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    pub fn sample(&self, rng: &mut RngStream) -> Vec<C> {
        self.covariance.sample(rng)
    }

    /// `E ||Z||^2 = tr B`.
    pub fn mean_sq_norm(&self) -> f64 {
        self.covariance.eigenvalues().iter().sum()
    }
}

/// Random positive-definite `n x n` matrix `G G*/n + 0.05 I`.
pub fn random_covariance(n: usize, rng: &mut RngStream) -> CovarianceMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.complex_gaussian());
    let mut m = &g * g.adjoint() / C::new(n as f64, 0.0);
    for i in 0..n {
        m[(i, i)] += C::new(0.05, 0.0);
    }
    CovarianceMatrix::new(m).expect("shifted Gram matrix is positive definite")
}

fn cpowu(z: C, mut k: usize) -> C {
    let mut base = z;
    let mut acc = C::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// `B(u,v) = N_d (1+<u,v>)^d / ((1+|u|^2)^{d/2} (1+|v|^2)^{d/2})`, with `<u,v> = sum u_k conj(v_k)`.
///
/// The modulus is assembled in log space; `B(v,u) = conj B(u,v)` holds bit for bit.
pub fn bergman_kernel(u: [C; 2], v: [C; 2], d: usize) -> C {
    let w = C::new(1.0, 0.0) + u[0] * v[0].conj() + u[1] * v[1].conj();
    let r = w.norm();
    if r == 0.0 {
        return C::new(0.0, 0.0);
    }
    let nu = (u[0].norm_sqr() + u[1].norm_sqr()).ln_1p();
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).ln_1p();
    let df = d as f64;
    let ln_mod = (dim(d) as f64).ln() + df * r.ln() - 0.5 * df * (nu + nv);
    cpowu(w / r, d) * ln_mod.exp()
}

/// The exact covariance `(B(z_i, z_j))` of the normalized evaluations.
pub fn evaluation_covariance(points: &[[C; 2]], d: usize) -> Result<CovarianceMatrix> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no points".into()));
    }
    let m = DMatrix::from_fn(n, n, |i, j| bergman_kernel(points[i], points[j], d));
    CovarianceMatrix::new(m).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::InvalidArgument(format!("points must be distinct: {msg}")),
        other => other,
    })
}

/// `Z(P) = P(1,z) / (1+|z|^2)^{d/2}`, the evaluation in the unit frame of `O(d)` at `z`.
pub fn normalized_evaluation(p: &HomogeneousPoly, z: [C; 2]) -> C {
    let n = (1.0 + z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
    p.eval_homogeneous([C::new(1.0 / n, 0.0), z[0] / n, z[1] / n])
}

/// Sample covariance of the normalized evaluations with entrywise standard errors.
#[derive(Clone, Debug)]
pub struct EmpiricalCovariance {
    pub matrix: DMatrix<C>,
    /// Standard error of the modulus-scale error of each entry.
    pub stderr: DMatrix<f64>,
    pub n_samples: u64,
}

#[derive(Clone)]
struct CovAcc {
    n: u64,
    sum: Vec<C>,
    sum_sq: Vec<f64>,
}

/// `E(Z_i conj Z_j)` estimated from `n_samples` Kostlan polynomials of degree `d`.
pub fn empirical_evaluation_covariance(
    points: &[[C; 2]],
    d: usize,
    n_samples: u64,
    rng: &RngStream,
) -> Result<EmpiricalCovariance> {
    let k = points.len();
    if k == 0 || n_samples < 2 {
        return Err(Error::InvalidArgument("need at least one point and two samples".into()));
    }
    for i in 0..k {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::InvalidArgument(format!("points {j} and {i} coincide")));
            }
        }
    }
    let parts = chunked_map(rng, n_samples, CHUNK, |r, count| {
        let mut acc = CovAcc {
            n: 0,
            sum: vec![C::new(0.0, 0.0); k * k],
            sum_sq: vec![0.0; k * k],
        };
        for _ in 0..count {
            let p = sample_poly(d, r);
            let z: Vec<C> = points.iter().map(|pt| normalized_evaluation(&p, *pt)).collect();
            for i in 0..k {
                for j in i..k {
                    let v = z[i] * z[j].conj();
                    acc.sum[i * k + j] += v;
                    acc.sum_sq[i * k + j] += v.norm_sqr();
                }
            }
            acc.n += 1;
        }
        acc
    });
    let mut sum = vec![C::new(0.0, 0.0); k * k];
    let mut sum_sq = vec![0.0; k * k];
    for p in &parts {
        for idx in 0..k * k {
            sum[idx] += p.sum[idx];
            sum_sq[idx] += p.sum_sq[idx];
        }
    }
    let n = n_samples as f64;
    let mut matrix = DMatrix::zeros(k, k);
    let mut stderr = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let mean = sum[i * k + j] / n;
            let var = (sum_sq[i * k + j] / n - mean.norm_sqr()).max(0.0) * n / (n - 1.0);
            let se = (var / n).sqrt();
            matrix[(i, j)] = mean;
            matrix[(j, i)] = mean.conj();
            stderr[(i, j)] = se;
            stderr[(j, i)] = se;
        }
        matrix[(i, i)].im = 0.0;
    }
    Ok(EmpiricalCovariance {
        matrix,
        stderr,
        n_samples,
    })
}

/// `E exp(lambda ||Z||^2) = 1 / det(I - lambda B)` for `0 < lambda < 1/||B||`.
pub fn mgf_sq_norm(b: &CovarianceMatrix, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda * b.op_norm() < 1.0) {
        return Err(Error::HypothesisViolated(format!(
            "lambda = {lambda} outside (0, 1/||B||) = (0, {})",
            1.0 / b.op_norm()
        )));
    }
    let ln: f64 = b.eigenvalues().iter().map(|e| (-lambda * e).ln_1p()).sum();
    Ok((-ln).exp())
}

/// Sample mean of `exp(lambda ||Z||^2)`.
pub fn empirical_mgf(b: &CovarianceMatrix, lambda: f64, n_samples: u64, rng: &RngStream) -> EstimatorResult {
    crate::stats::mc_mean(rng, n_samples, |r| {
        let z = b.sample(r);
        (lambda * z.iter().map(|c| c.norm_sqr()).sum::<f64>()).exp()
    })
}

/// `P(||P|| >= R) <= R^{2N} / N^N exp(-R^2 + N)` for a standard Gaussian on `C^N`, `R > sqrt N`.
pub fn tail_bound_large_ball(n: usize, r: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || !(r * r > nf) {
        return Err(Error::HypothesisViolated(format!(
            "need R > sqrt(N), got R = {r}, N = {n}"
        )));
    }
    Ok((2.0 * nf * r.ln() - nf * nf.ln() - r * r + nf).exp())
}

/// `P(||Z||^2 >= N y) <= y^N / det B exp(N (1 - y/||B||))` for `y > ||B||`.
pub fn bernstein_tail_bound(b: &CovarianceMatrix, y: f64) -> Result<f64> {
    let nb = b.op_norm();
    if !(y > nb) {
        return Err(Error::HypothesisViolated(format!("need y > ||B|| = {nb}, got {y}")));
    }
    let n = b.dim() as f64;
    Ok((n * y.ln() - b.ln_det() + n * (1.0 - y / nb)).exp())
}

/// A probability bound together with its logarithm and a vacuity flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub ln_value: f64,
    /// `value >= 1`: the bound says nothing.
    pub vacuous: bool,
}

impl BoundValue {
    pub fn from_ln(ln_value: f64) -> Self {
        BoundValue {
            value: ln_value.exp(),
            ln_value,
            vacuous: ln_value >= 0.0,
        }
    }
}

/// `P(A) <= (e a/(a - 2b)) exp(1 - a/b + ln a)^N` where `a = E_A(||Z||^2/N) > 2b`, `b = ||B|| ||B^{-1}||`.
/// Requires some `V(Z_i) = 1`.
pub fn expbound_prop(b: &CovarianceMatrix, a: f64) -> Result<BoundValue> {
    if !b.has_unit_diagonal_entry() {
        return Err(Error::HypothesisViolated("no coordinate has unit variance".into()));
    }
    let c = b.condition();
    if !(a > 2.0 * c) {
        return Err(Error::HypothesisViolated(format!(
            "need a > 2 ||B|| ||B^-1|| = {}, got {a}",
            2.0 * c
        )));
    }
    let n = b.dim() as f64;
    Ok(BoundValue::from_ln(
        1.0 + a.ln() - (a - 2.0 * c).ln() + n * (1.0 - a / c + a.ln()),
    ))
}

/// Complement bound `5e (b (mu + (1-mu) e^{-1/2}))^N`.
pub fn cormain_bound(b: f64, mu: f64, n: u64) -> Result<BoundValue> {
    if !(b >= 1.0) || !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidArgument(format!(
            "need b >= 1 and mu in [0,1], got b = {b}, mu = {mu}"
        )));
    }
    let base = b * (mu + (1.0 - mu) * (-0.5f64).exp());
    Ok(BoundValue::from_ln(5f64.ln() + 1.0 + n as f64 * base.ln()))
}

/// General complement bound for `N` pairs with comparison constant `c_N`, scale `alpha`
/// and threshold `y >= sqrt(2 c_N)/alpha`.
pub fn probmain_bound(c_n: f64, alpha: f64, y: f64, b: f64, mu: f64, n: u64) -> Result<BoundValue> {
    if !(c_n >= 1.0 && alpha > 0.0 && b >= 1.0 && (0.0..=1.0).contains(&mu)) {
        return Err(Error::InvalidArgument(
            "need c_N >= 1, alpha > 0, b >= 1, mu in [0,1]".into(),
        ));
    }
    let ay2 = (alpha * y).powi(2);
    if !(ay2 > 2.0 * c_n) {
        return Err(Error::HypothesisViolated(format!(
            "need y > sqrt(2 c_N)/alpha = {}",
            (2.0 * c_n).sqrt() / alpha
        )));
    }
    let inner = mu + (1.0 - mu) * (1.0 - ay2 / c_n + ay2.ln()).exp();
    Ok(BoundValue::from_ln(
        1.0 + ay2.ln() - (ay2 - 2.0 * c_n).ln() + n as f64 * (b * inner).ln(),
    ))
}

/// `1 - (1 - pX pY)^N`, the chance that one of `N` independent pairs succeeds.
pub fn independent_case_probability(px: f64, py: f64, n: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&px) || !(0.0..=1.0).contains(&py) {
        return Err(Error::InvalidArgument(format!(
            "probabilities out of range: {px}, {py}"
        )));
    }
    let q = px * py;
    if q == 1.0 {
        return Ok(if n == 0 { 0.0 } else { 1.0 });
    }
    Ok(-(n as f64 * (-q).ln_1p()).exp_m1())
}

/// Frequency of "some pair has both coordinates succeed" over simulated independent Bernoulli pairs.
pub fn simulate_independent_pairs(px: f64, py: f64, n: u64, trials: u64, rng: &RngStream) -> EstimatorResult {
    crate::stats::mc_frequency(rng, trials, |r| {
        let mut hit = false;
        for _ in 0..n {
            let x = r.uniform() < px;
            let y = r.uniform() < py;
            hit |= x && y;
        }
        hit
    })
}

/// Empirical check of the two conditional-expectation inequalities for `Z = ||Z||^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalReport {
    pub threshold: f64,
    pub p_event: EstimatorResult,
    pub mean: f64,
    pub variance: f64,
    pub conditional_mean: f64,
    /// The split point `x` used in the tail-integral bound.
    pub split: f64,
    pub tail_integral_bound: f64,
    pub variance_bound: f64,
    pub tail_integral_holds: bool,
    pub variance_holds: bool,
}

/// Samples `||Z||^2` and tests `P(A) <= E(Z-x)_+ / (E_A Z - x)` and
/// `P(A) <= 4 V / (E_A Z - E Z)^2` for the event `A = {||Z||^2 >= q}`.
pub fn check_conditional_bounds(
    spec: &GaussianVectorSpec,
    q: f64,
    n_samples: u64,
    rng: &RngStream,
) -> Result<ConditionalReport> {
    let exact_mean = spec.mean_sq_norm();
    if !(q > exact_mean) {
        return Err(Error::Inconclusive(format!(
            "threshold {q} is not above the mean {exact_mean}"
        )));
    }
    let zs: Vec<f64> = chunked_map(rng, n_samples, CHUNK, |r, count| {
        (0..count)
            .map(|_| spec.sample(r).iter().map(|c| c.norm_sqr()).sum::<f64>())
            .collect::<Vec<f64>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let mut all = Moments::new();
    let mut cond = Moments::new();
    for &z in &zs {
        all.push(z);
        if z >= q {
            cond.push(z);
        }
    }
    let hits = cond.n;
    if hits < 30 || n_samples - hits < 30 {
        return Err(Error::Inconclusive(format!(
            "event count {hits} of {n_samples} is too extreme"
        )));
    }
    let p_event = EstimatorResult::from_counts(hits, n_samples);
    let e = all.mean;
    let e_a = cond.mean;
    let v = all.variance();
    let x = 0.5 * (e + e_a);
    let excess = zs.iter().map(|z| (z - x).max(0.0)).sum::<f64>() / n_samples as f64;
    let tail_integral_bound = excess / (e_a - x);
    let variance_bound = 4.0 * v / (e_a - e).powi(2);
    let slack = 3.0 * p_event.stderr;
    Ok(ConditionalReport {
        threshold: q,
        p_event,
        mean: e,
        variance: v,
        conditional_mean: e_a,
        split: x,
        tail_integral_bound,
        variance_bound,
        tail_integral_holds: p_event.mean <= tail_integral_bound + slack,
        variance_holds: p_event.mean <= variance_bound + slack,
    })
}

/// `mu(x) = 1 - exp(-x^2 / ||C||)`.
pub fn bergman_mu(c: &CovarianceMatrix, x: f64) -> f64 {
    -(-x * x / c.op_norm()).exp_m1()
}

/// `(||C|| ||C^{-1}||)^N mu^{#I} (1-mu)^{N-#I}` with `C` the correlation matrix of `cov`.
pub fn bergmanbound(cov: &CovarianceMatrix, x: f64, subset: &[usize]) -> Result<BoundValue> {
    let n = cov.dim();
    if subset.iter().any(|&i| i >= n) {
        return Err(Error::InvalidArgument(format!("index set {subset:?} exceeds N = {n}")));
    }
    let c = cov.normalized();
    let mu = bergman_mu(&c, x);
    let k = subset.len() as f64;
    let nf = n as f64;
    // 0 * ln 0 counts as 0.
    let term = |power: f64, ln_base: f64| if power == 0.0 { 0.0 } else { power * ln_base };
    Ok(BoundValue::from_ln(
        nf * c.condition().ln() + term(k, mu.ln()) + term(nf - k, (-mu).ln_1p()),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BergmanCheck {
    pub bound: BoundValue,
    pub empirical: EstimatorResult,
    pub holds: bool,
}

/// Frequency of `{|X_i|^2 < x^2 V(X_i) iff i in I}` for `X ~ N(0, cov)` against [`bergmanbound`].
pub fn bergmanbound_check(
    cov: &CovarianceMatrix,
    x: f64,
    subset: &[usize],
    n_samples: u64,
    rng: &RngStream,
) -> Result<BergmanCheck> {
    let bound = bergmanbound(cov, x, subset)?;
    let n = cov.dim();
    let var: Vec<f64> = (0..n).map(|i| cov.matrix()[(i, i)].re).collect();
    let mut inside = vec![false; n];
    for &i in subset {
        inside[i] = true;
    }
    let empirical = crate::stats::mc_frequency(rng, n_samples, |r| {
        let z = cov.sample(r);
        (0..n).all(|i| (z[i].norm_sqr() < x * x * var[i]) == inside[i])
    });
    let holds = empirical.mean <= bound.value + 3.0 * empirical.stderr;
    Ok(BergmanCheck {
        bound,
        empirical,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fs_geometry::fs_distance;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn kernel_examples() {
        let u = [c(0.3, -1.1), c(2.0, 0.5)];
        assert!((bergman_kernel(u, u, 3) - c(10.0, 0.0)).norm() < 1e-12);
        let b = bergman_kernel([c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)], 2);
        assert!((b - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kernel_decays_with_distance() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..1000 {
            let mut pt = || [c(rng.normal(), rng.normal()) * 2.0, c(rng.normal(), rng.normal()) * 2.0];
            let (u, v) = (pt(), pt());
            let d = 7;
            let bound = dim(d) as f64 * fs_distance(u, v).cos().powi(d as i32);
            let b = bergman_kernel(u, v, d);
            assert!(b.norm() <= bound * (1.0 + 1e-10));
            assert_eq!(bergman_kernel(v, u, d), b.conj());
        }
    }

    #[test]
    fn identity_norms() {
        let i = CovarianceMatrix::identity(4);
        assert_eq!(i.op_norm(), 1.0);
        assert_eq!(i.inf_norm(), 1.0);
        assert_eq!(i.inverse_bounds().unwrap(), (1.0, 0.0));
        let far = CovarianceMatrix::from_real_rows(2, &[3.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(far.inverse_bounds().unwrap_err().is_hypothesis());
    }

    #[test]
    fn rejects_non_hermitian_and_singular() {
        assert!(CovarianceMatrix::from_real_rows(2, &[1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(CovarianceMatrix::from_real_rows(2, &[1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(CovarianceMatrix::from_real_rows(2, &[1.0, 0.0, 0.0, -1.0]).is_err());
    }

    #[test]
    fn inverse_and_normalized() {
        let mut rng = RngStream::new(3, 1);
        let b = random_covariance(5, &mut rng);
        let prod = b.matrix() * b.inverse().matrix();
        assert!((prod - DMatrix::<C>::identity(5, 5)).norm() < 1e-9);
        let n = b.normalized();
        for i in 0..5 {
            assert_eq!(n.matrix()[(i, i)], c(1.0, 0.0));
        }
        assert!(n.op_norm() >= 1.0 && n.inverse_op_norm() >= 1.0);
    }

    #[test]
    fn mgf_examples() {
        let i1 = CovarianceMatrix::identity(1);
        assert!((mgf_sq_norm(&i1, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!((mgf_sq_norm(&i1, 1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!(mgf_sq_norm(&i1, 1.0).unwrap_err().is_hypothesis());
        assert!(mgf_sq_norm(&i1, 0.0).is_err());
    }

    #[test]
    fn tail_examples() {
        let b = tail_bound_large_ball(1, 2.0).unwrap();
        assert!((b - 4.0 * (-3f64).exp()).abs() < 1e-15);
        assert!((b - 0.199_148_273_471_8).abs() < 1e-12);
        assert!(tail_bound_large_ball(1, 60.0).unwrap() < 1e-300);
        assert!(tail_bound_large_ball(4, 2.0).unwrap_err().is_hypothesis());
        let i1 = CovarianceMatrix::identity(1);
        let bb = bernstein_tail_bound(&i1, 2.0).unwrap();
        assert!((bb - 2.0 * (-1f64).exp()).abs() < 1e-15);
        assert!(bernstein_tail_bound(&i1, 1.0 + 1e-9).unwrap() >= 1.0 - 1e-8);
        assert!(bernstein_tail_bound(&i1, 1.0).is_err());
    }

    #[test]
    fn cormain_examples() {
        let v = cormain_bound(1.0, 0.9, 100).unwrap();
        assert!((v.value - 0.245_426_697_069_954).abs() < 1e-12);
        assert!(!v.vacuous);
        let v = cormain_bound(1.0, 0.9, 10).unwrap();
        assert!((v.value - 9.097_670_801_942_71).abs() < 1e-10);
        assert!(v.vacuous);
        let v = cormain_bound(1.0, 1.0, 10_000).unwrap();
        assert!((v.value - 5.0 * E).abs() < 1e-12 && v.vacuous);
        assert!(cormain_bound(0.5, 0.5, 1).is_err());
    }

    #[test]
    fn independent_examples() {
        assert!((independent_case_probability(0.5, 0.5, 1).unwrap() - 0.25).abs() < 1e-15);
        let p = independent_case_probability(0.3, 0.4, 20).unwrap();
        assert!((p - 0.922_437_206_361_81).abs() < 1e-12);
        assert!((independent_case_probability(0.01, 0.01, 10_000_000).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bergmanbound_identity_is_independent_case() {
        let i = CovarianceMatrix::identity(3);
        let b = bergmanbound(&i, 1.0, &[0, 2]).unwrap();
        let mu = 1.0 - (-1f64).exp();
        assert!((b.value - mu * mu * (1.0 - mu)).abs() < 1e-14);
        let z = bergmanbound(&i, 0.0, &[]).unwrap();
        assert!((z.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expbound_needs_hypotheses() {
        let i = CovarianceMatrix::identity(2);
        assert!(expbound_prop(&i, 1.5).unwrap_err().is_hypothesis());
        let v = expbound_prop(&i, 6.0).unwrap();
        let expect = E * 6.0 / 4.0 * (1.0 - 6.0 + 6f64.ln()).exp().powi(2);
        assert!((v.value - expect).abs() < 1e-12);
        let two = CovarianceMatrix::from_real_rows(1, &[2.0]).unwrap();
        assert!(expbound_prop(&two, 10.0).unwrap_err().is_hypothesis());
    }
}
