//! Roots of univariate complex polynomials.
//!
//! Coefficients are given lowest degree first: `c[0] + c[1] z + ... + c[n] z^n`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

type C = Complex64;

/// Finite roots plus the number lost at infinity through leading-coefficient vanishing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyRoots {
    pub finite: Vec<C>,
    pub at_infinity: usize,
}

/// Relative size below which a leading coefficient counts as zero.
pub const LEADING_EPS: f64 = 1e-14;

/// Degree above which the companion matrix is skipped for cold starts.
pub const COMPANION_MAX_DEGREE: usize = 8;

pub fn horner(c: &[C], z: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * z + a)
}

/// Value and derivative together.
pub fn horner_with_derivative(c: &[C], z: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of `c`, optionally warm-started from approximate roots.
///
/// Degree 1 and 2 use closed forms; otherwise Aberth-Ehrlich iteration is used
/// when a warm start is supplied, and the companion matrix for cold starts up
/// to [`COMPANION_MAX_DEGREE`]. Non-converged Aberth runs fall back to the
/// companion matrix.
pub fn poly_roots(c: &[C], warm: Option<&[C]>) -> Result<PolyRoots> {
    let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::DegenerateInput("polynomial vanishes identically".into()));
    }
    let mut hi = c.len() - 1;
    while c[hi].norm() <= LEADING_EPS * scale {
        hi -= 1;
    }
    let at_infinity = c.len() - 1 - hi;
    let mut lo = 0;
    while c[lo].norm() == 0.0 {
        lo += 1;
    }
    let zeros_at_origin = lo;
    let core: Vec<C> = c[lo..=hi].iter().map(|a| a / c[hi]).collect();
    let n = core.len() - 1;
    let mut finite = vec![C::new(0.0, 0.0); zeros_at_origin];
    let roots = match n {
        0 => Vec::new(),
        1 => vec![-core[0]],
        2 => quadratic(core[0], core[1]),
        _ => {
            let warm = warm.filter(|w| w.len() == n + zeros_at_origin).map(|w| {
                let mut w: Vec<C> = w.to_vec();
                w.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
                w.truncate(n);
                w
            });
            match warm {
                Some(w) => match aberth(&core, w, 60) {
                    Some(r) => r,
                    None => companion_or_aberth(&core),
                },
                None => companion_or_aberth(&core),
            }
        }
    };
    finite.extend(roots);
    Ok(PolyRoots { finite, at_infinity })
}

fn companion_or_aberth(monic: &[C]) -> Vec<C> {
    let n = monic.len() - 1;
    if n <= COMPANION_MAX_DEGREE {
        return companion_roots(monic);
    }
    aberth(monic, initial_guesses(monic), 500).unwrap_or_else(|| companion_roots(monic))
}

/// Roots of the monic quadratic `z^2 + b z + c`, without cancellation.
fn quadratic(c: C, b: C) -> Vec<C> {
    let disc = (b * b - 4.0 * c).sqrt();
    // Pick the sign that avoids cancellation in -b -/+ sqrt(disc).
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        return vec![C::new(0.0, 0.0), C::new(0.0, 0.0)];
    }
    vec![q, c / q]
}

/// Eigenvalues of the companion matrix of a monic polynomial, Newton-polished.
pub fn companion_roots(monic: &[C]) -> Vec<C> {
    let n = monic.len() - 1;
    let mut m = DMatrix::<C>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    let schur = Schur::new(m);
    let mut roots: Vec<C> = match schur.eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => {
            let (_, t) = schur.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
    };
    for r in roots.iter_mut() {
        *r = newton_polish(monic, *r, 3);
    }
    roots
}

fn newton_polish(c: &[C], mut z: C, steps: usize) -> C {
    for _ in 0..steps {
        let (p, dp) = horner_with_derivative(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let next = z - step;
        // Only accept steps that reduce the residual.
        if horner(c, next).norm() < p.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}

/// Equally spaced starting points on a circle of the geometric-mean root radius.
pub fn initial_guesses(monic: &[C]) -> Vec<C> {
    let n = monic.len() - 1;
    let r = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let centroid = -monic[n - 1] / n as f64;
    (0..n)
        .map(|k| centroid + C::from_polar(r, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect()
}

/// Aberth-Ehrlich simultaneous iteration on a monic polynomial.
/// Returns `None` if it fails to converge within `max_iter` sweeps.
pub fn aberth(monic: &[C], mut z: Vec<C>, max_iter: usize) -> Option<Vec<C>> {
    let n = z.len();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(monic, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = C::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        continue;
                    }
                    s += diff.inv();
                }
            }
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[i] -= w;
            if w.norm() <= 1e-14 * z[i].norm().max(1e-300) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Some(z);
        }
    }
    None
}
