//! Closed-form Fubini-Study geometry of CP^2 in the affine chart `Z = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

type C = Complex64;

/// Radii `(x, y)` of the torus `|z1| = x, |z2| = y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusRadii {
    pub x: f64,
    pub y: f64,
}

impl TorusRadii {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "torus radii must be positive, got ({x}, {y})"
            )));
        }
        Ok(TorusRadii { x, y })
    }

    pub fn log_point(&self) -> LogPoint {
        LogPoint::new(self.x.ln(), self.y.ln())
    }
}

/// A point `t = (t1, t2)` of the amoeba plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogPoint {
    pub t1: f64,
    pub t2: f64,
}

impl LogPoint {
    pub fn new(t1: f64, t2: f64) -> Self {
        LogPoint { t1, t2 }
    }

    pub fn radii(&self) -> TorusRadii {
        TorusRadii {
            x: self.t1.exp(),
            y: self.t2.exp(),
        }
    }
}

/// Total FS volume of CP^2.
pub const FS_VOLUME_CP2: f64 = PI * PI / 2.0;

/// Integral of the area density over the whole amoeba plane, `2 pi^3`.
pub const AREA_DENSITY_TOTAL: f64 = 2.0 * PI * PI * PI;

fn norm2(z: [C; 2]) -> f64 {
    z[0].norm_sqr() + z[1].norm_sqr()
}

/// `d_FS(0, z) = arctan |z|`.
pub fn fs_distance_from_origin(z: [C; 2]) -> f64 {
    norm2(z).sqrt().atan()
}

/// FS distance between two homogeneous points, `arccos(|<u,v>| / |u||v|)`.
pub fn fs_distance_homogeneous(u: [C; 3], v: [C; 3]) -> f64 {
    let inner: C = (0..3).map(|k| u[k] * v[k].conj()).sum();
    let nu: f64 = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let cos = (inner.norm() / (nu * nv)).min(1.0);
    // acos loses precision near 1; use the sine of the angle there.
    if cos > 0.9 {
        let mut cross = 0.0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                cross += (u[i] * v[j] - u[j] * v[i]).norm_sqr();
            }
        }
        (cross.sqrt() / (nu * nv)).min(1.0).asin()
    } else {
        cos.acos()
    }
}

/// FS distance between two affine points.
pub fn fs_distance(u: [C; 2], v: [C; 2]) -> f64 {
    let one = C::new(1.0, 0.0);
    fs_distance_homogeneous([one, u[0], u[1]], [one, v[0], v[1]])
}

/// `Vol B_FS(0, delta) = pi^n / n! * sin(delta)^{2n}`.
pub fn fs_ball_volume(n: u32, delta: f64) -> Result<f64> {
    if !(0.0..=PI / 2.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("radius {delta} outside [0, pi/2]")));
    }
    let fact: f64 = (1..=n).map(f64::from).product();
    Ok(PI.powi(n as i32) / fact * delta.sin().powi(2 * n as i32))
}

/// Density of FS volume against Lebesgue measure on C^2, `(1+|z|^2)^{-3}`.
pub fn fs_volume_density(z: [C; 2]) -> f64 {
    (1.0 + norm2(z)).powi(-3)
}

/// Squared FS norm of a tangent vector `h` at `z`.
pub fn fs_tangent_norm_sq(z: [C; 2], h: [C; 2]) -> f64 {
    let n = 1.0 + norm2(z);
    let hz: C = h[0] * z[0].conj() + h[1] * z[1].conj();
    norm2(h) / n - hz.norm_sqr() / (n * n)
}

/// FS area of the torus `T_(x,y)`: `4 pi^2 x y / (1+x^2+y^2)^{3/2}`.
pub fn torus_area(r: TorusRadii) -> f64 {
    4.0 * PI * PI * r.x * r.y / (1.0 + r.x * r.x + r.y * r.y).powf(1.5)
}

/// `a(t) = A(e^t1, e^t2)`, evaluated without overflow for large `|t|`.
pub fn area_density(t: LogPoint) -> f64 {
    // Divide through by m^3 where m = max(1, x, y), in log space.
    let m = t.t1.max(t.t2).max(0.0);
    let x = (t.t1 - m).exp();
    let y = (t.t2 - m).exp();
    let one = (-m).exp();
    4.0 * PI * PI * x * y / (one * one + x * x + y * y).powf(1.5) * (-m).exp()
}

/// Product grid of equiangular circle points on `T_(x,y)` at pairwise Euclidean distance >= delta.
pub fn pack_torus_points(r: TorusRadii, delta: f64) -> Result<Vec<[C; 2]>> {
    if !(delta > 0.0 && delta <= 2.0 * r.x.min(r.y)) {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} must lie in (0, 2 min(x, y)]"
        )));
    }
    let n1 = (4.0 * r.x / delta).floor() as usize;
    let n2 = (4.0 * r.y / delta).floor() as usize;
    let c1 = circle_points(r.x, n1);
    let c2 = circle_points(r.y, n2);
    let mut out = Vec::with_capacity(n1 * n2);
    for a in &c1 {
        for b in &c2 {
            out.push([*a, *b]);
        }
    }
    Ok(out)
}

fn circle_points(radius: f64, n: usize) -> Vec<C> {
    (0..n)
        .map(|k| C::from_polar(radius, 2.0 * PI * k as f64 / n as f64))
        .collect()
}
