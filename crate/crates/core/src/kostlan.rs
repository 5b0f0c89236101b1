//! Homogeneous polynomials on CP^2 and their Kostlan (Fubini-Study Gaussian) ensemble.
//!
//! Variables are ordered `(Z, X, Y)`; the affine chart `Z = 1` has
//! coordinates `z1 = X/Z`, `z2 = Y/Z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

type C = Complex64;

/// Exponents of `Z^i0 X^i1 Y^i2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex {
    pub i0: usize,
    pub i1: usize,
    pub i2: usize,
}

impl MultiIndex {
    pub fn new(i0: usize, i1: usize, i2: usize) -> Self {
        MultiIndex { i0, i1, i2 }
    }

    pub fn degree(&self) -> usize {
        self.i0 + self.i1 + self.i2
    }
}

/// N_d = (d+1)(d+2)/2, the dimension of the degree-d space.
pub fn dim(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Binomial coefficient in floating point (exact up to 2^53).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    if acc < 9.0e15 {
        acc.round()
    } else {
        acc
    }
}

/// Squared FS norm of the monomial: `i0! i1! i2! 2! / (d+2)!`.
pub fn monomial_fs_norm_sq(mi: MultiIndex, d: usize) -> Result<f64> {
    if mi.degree() != d {
        return Err(Error::InvalidArgument(format!(
            "multi-index {:?} has degree {}, expected {}",
            mi,
            mi.degree(),
            d
        )));
    }
    Ok(monomial_norm_sq_unchecked(mi.i1, mi.i2, d))
}

fn monomial_norm_sq_unchecked(i1: usize, i2: usize, d: usize) -> f64 {
    // (d+2)!/(i0! i1! i2! 2!) = multinomial(d; i) * (d+1)(d+2)/2
    let multinomial = binomial(d, i1) * binomial(d - i1, i2);
    1.0 / (multinomial * ((d + 1) * (d + 2)) as f64 / 2.0)
}

/// General-n version of the monomial norm, `(d+n choose i)^{-1}` with
/// `(d+n choose i) = (d+n)!/(i_0!...i_n! n!)`.
pub fn monomial_fs_norm_sq_general(exponents: &[usize]) -> f64 {
    let n = exponents.len() - 1;
    let d: usize = exponents.iter().sum();
    let mut ln = ln_factorial(d + n) - ln_factorial(n);
    for &e in exponents {
        ln -= ln_factorial(e);
    }
    (-ln).exp()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Dense homogeneous polynomial, coefficients ordered lexicographically by `(i1, i2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousPoly {
    degree: usize,
    coeffs: Vec<C>,
}

impl HomogeneousPoly {
    pub fn zero(degree: usize) -> Self {
        HomogeneousPoly {
            degree,
            coeffs: vec![C::new(0.0, 0.0); dim(degree)],
        }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() != dim(degree) {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for degree {}, got {}",
                dim(degree),
                degree,
                coeffs.len()
            )));
        }
        Ok(HomogeneousPoly { degree, coeffs })
    }

    /// Builds a polynomial from `(multi-index, coefficient)` terms; repeated indices add up.
    pub fn from_terms(degree: usize, terms: &[(MultiIndex, C)]) -> Result<Self> {
        let mut p = HomogeneousPoly::zero(degree);
        for &(mi, c) in terms {
            if mi.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "term {:?} does not have degree {}",
                    mi, degree
                )));
            }
            p.coeffs[index_of(degree, mi.i1, mi.i2)] += c;
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C] {
        &mut self.coeffs
    }

    pub fn coeff(&self, mi: MultiIndex) -> C {
        if mi.degree() != self.degree {
            return C::new(0.0, 0.0);
        }
        self.coeffs[index_of(self.degree, mi.i1, mi.i2)]
    }

    pub fn set_coeff(&mut self, mi: MultiIndex, c: C) -> Result<()> {
        if mi.degree() != self.degree {
            return Err(Error::InvalidArgument(format!(
                "{:?} does not have degree {}",
                mi, self.degree
            )));
        }
        self.coeffs[index_of(self.degree, mi.i1, mi.i2)] = c;
        Ok(())
    }

    /// Iterates `(multi-index, coefficient)` in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, C)> + '_ {
        multi_indices(self.degree).zip(self.coeffs.iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Squared FS L^2 norm, the monomials being orthogonal.
    pub fn fs_norm_sq(&self) -> f64 {
        self.terms()
            .map(|(mi, c)| c.norm_sqr() * monomial_norm_sq_unchecked(mi.i1, mi.i2, self.degree))
            .sum()
    }

    /// FS Hermitian product `<self, other>` (linear in the first slot).
    pub fn fs_inner(&self, other: &HomogeneousPoly) -> Result<C> {
        if other.degree != self.degree {
            return Err(Error::InvalidArgument("degree mismatch".into()));
        }
        Ok(self
            .terms()
            .zip(other.coeffs.iter())
            .map(|((mi, a), b)| a * b.conj() * monomial_norm_sq_unchecked(mi.i1, mi.i2, self.degree))
            .sum())
    }

    pub fn scale(&self, s: C) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if other.degree != self.degree {
            return Err(Error::InvalidArgument("degree mismatch".into()));
        }
        Ok(HomogeneousPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Product of homogeneous polynomials (degrees add).
    pub fn mul(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        let d = self.degree + other.degree;
        let mut out = HomogeneousPoly::zero(d);
        for (ma, a) in self.terms() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (mb, b) in other.terms() {
                out.coeffs[index_of(d, ma.i1 + mb.i1, ma.i2 + mb.i2)] += a * b;
            }
        }
        out
    }

    /// Value at a homogeneous point `w = (Z, X, Y)`.
    pub fn eval_homogeneous(&self, w: [C; 3]) -> C {
        let d = self.degree;
        let p0 = powers(w[0], d);
        let p1 = powers(w[1], d);
        let p2 = powers(w[2], d);
        let mut acc = C::new(0.0, 0.0);
        let mut k = 0;
        for i1 in 0..=d {
            for i2 in 0..=(d - i1) {
                acc += self.coeffs[k] * p0[d - i1 - i2] * p1[i1] * p2[i2];
                k += 1;
            }
        }
        acc
    }

    /// Value of the dehomogenization `P(1, z1, z2)`.
    pub fn eval_affine(&self, z: [C; 2]) -> C {
        self.eval_homogeneous([C::new(1.0, 0.0), z[0], z[1]])
    }

    /// Coefficients `c_k` of the slice `z2 -> P(1, z1, z2) = sum_k c_k z2^k`.
    pub fn slice_in_z2(&self, z1: C) -> Vec<C> {
        let d = self.degree;
        let mut out = vec![C::new(0.0, 0.0); d + 1];
        // Horner in z1 for every power of z2.
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = C::new(0.0, 0.0);
            for i1 in (0..=(d - k)).rev() {
                acc = acc * z1 + self.coeffs[index_of(d, i1, k)];
            }
            *slot = acc;
        }
        out
    }

    /// Precomputed layout for fast repeated slicing.
    pub fn slicer(&self) -> Slicer {
        Slicer::new(self)
    }
}

/// Column-major table `a[k][i1]` of a polynomial, tuned for slices in `z2`.
#[derive(Clone, Debug)]
pub struct Slicer {
    degree: usize,
    table: Vec<Vec<C>>,
}

impl Slicer {
    fn new(p: &HomogeneousPoly) -> Self {
        let d = p.degree;
        let table = (0..=d)
            .map(|k| (0..=(d - k)).map(|i1| p.coeffs[index_of(d, i1, k)]).collect())
            .collect();
        Slicer { degree: d, table }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Writes slice coefficients into `c` and their z1-derivatives into `dc`.
    pub fn slice_with_derivative(&self, z1: C, c: &mut [C], dc: &mut [C]) {
        for (k, row) in self.table.iter().enumerate() {
            let mut acc = C::new(0.0, 0.0);
            let mut dacc = C::new(0.0, 0.0);
            for a in row.iter().rev() {
                dacc = dacc * z1 + acc;
                acc = acc * z1 + a;
            }
            c[k] = acc;
            dc[k] = dacc;
        }
    }

    pub fn slice(&self, z1: C, c: &mut [C]) {
        for (k, row) in self.table.iter().enumerate() {
            let mut acc = C::new(0.0, 0.0);
            for a in row.iter().rev() {
                acc = acc * z1 + a;
            }
            c[k] = acc;
        }
    }
}

fn powers(z: C, d: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = C::new(1.0, 0.0);
    for _ in 0..=d {
        out.push(acc);
        acc *= z;
    }
    out
}

/// Storage position of `(i1, i2)` for degree `d`.
pub fn index_of(d: usize, i1: usize, i2: usize) -> usize {
    i1 * (d + 1) - i1 * i1.saturating_sub(1) / 2 + i2
}

/// All multi-indices of degree `d` in storage order.
pub fn multi_indices(d: usize) -> impl Iterator<Item = MultiIndex> {
    (0..=d).flat_map(move |i1| (0..=(d - i1)).map(move |i2| MultiIndex::new(d - i1 - i2, i1, i2)))
}

/// Draws from the Kostlan ensemble: coefficient of `X^i` is `a_i / ||X^i||_FS`.
pub fn sample_poly(d: usize, rng: &mut RngStream) -> HomogeneousPoly {
    let coeffs = multi_indices(d)
        .map(|mi| rng.complex_gaussian() / monomial_norm_sq_unchecked(mi.i1, mi.i2, d).sqrt())
        .collect();
    HomogeneousPoly { degree: d, coeffs }
}

/// `|P(1,z)|^2 / (1+|z|^2)^d`, scaled so that large `d` or `|z|` cannot overflow.
pub fn fs_point_norm_sq(p: &HomogeneousPoly, z: [C; 2]) -> f64 {
    fs_point_norm_sq_homogeneous(p, [C::new(1.0, 0.0), z[0], z[1]])
}

/// `|P(w)|^2 / |w|^{2d}` at a homogeneous point.
pub fn fs_point_norm_sq_homogeneous(p: &HomogeneousPoly, w: [C; 3]) -> f64 {
    let n = (w[0].norm_sqr() + w[1].norm_sqr() + w[2].norm_sqr()).sqrt();
    if n == 0.0 {
        return 0.0;
    }
    let u = [w[0] / n, w[1] / n, w[2] / n];
    p.eval_homogeneous(u).norm_sqr()
}
