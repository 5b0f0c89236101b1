//! Deterministic bounds on the expected amoeba area.
//!
//! Everything here revolves around the level set `d A(x,y) / 4 pi = 1`, which in
//! polar coordinates `(x, y) = rho (cos theta, sin theta)` crosses the diagonal at
//! the two radii `rho0 < sqrt 2 < rho1` solving `rho^2 / (1+rho^2)^{3/2} = 2/(pi d)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::quadrature;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bracketing intervals for `rho0^2` and `rho1^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusBrackets {
    pub rho0_sq: Interval,
    pub rho1_sq: Interval,
}

/// Per-degree summary of every bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: u64,
    pub rho0_sq_lo: f64,
    pub rho0_sq_hi: f64,
    pub rho1_sq_lo: f64,
    pub rho1_sq_hi: f64,
    pub rho0_sq: f64,
    pub rho1_sq: f64,
    pub integral_value: f64,
    pub expupper_value: f64,
    /// Closed-form area bound maximised termwise over the published brackets, when available.
    pub expupper_tabulated: Option<f64>,
    pub upperboundall_value: f64,
    pub mainbound_value: f64,
    pub multiarea_half: f64,
    pub global_bound: f64,
}

fn level(d: f64) -> f64 {
    2.0 / (PI * d)
}

/// `ln(rho^2 / (1+rho^2)^{3/2})` as a function of `s = ln rho^2`.
fn ln_level_fn(s: f64) -> f64 {
    // ln(1+e^s) computed stably on both tails.
    let ln1p_exp = if s > 35.0 { s + (-s).exp() } else { s.exp().ln_1p() };
    s - 1.5 * ln1p_exp
}

fn ln_level_fn_deriv(s: f64) -> f64 {
    // 1 - 1.5 * e^s / (1+e^s)
    1.0 - 1.5 / (1.0 + (-s).exp())
}

/// Bracketed Newton on `g(s) = 0` for `s` in `[lo, hi]` with `g(lo) g(hi) < 0`.
fn newton_bisect<G: Fn(f64) -> f64, D: Fn(f64) -> f64>(g: G, dg: D, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    let rising = glo < 0.0;
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = g(s);
        if v == 0.0 {
            return s;
        }
        if (v < 0.0) == rising {
            lo = s;
        } else {
            hi = s;
        }
        let dv = dg(s);
        let mut next = s - v / dv;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() <= 1e-15 * s.abs().max(1.0) {
            return next;
        }
        s = next;
    }
    s
}

/// The two radii `rho0 < sqrt 2 < rho1` of the level set.
pub fn solve_rho(d: f64) -> Result<(f64, f64)> {
    let (r0, r1) = solve_rho_sq(d)?;
    Ok((r0.sqrt(), r1.sqrt()))
}

/// Same as [`solve_rho`] but returning `(rho0^2, rho1^2)`.
pub fn solve_rho_sq(d: f64) -> Result<(f64, f64)> {
    if !(d >= 2.0) || !d.is_finite() {
        return Err(Error::OutOfDomain(format!("the level equation needs d >= 2, got {d}")));
    }
    let target = level(d).ln();
    let g = |s: f64| ln_level_fn(s) - target;
    let s_mid = 2f64.ln();
    // Brackets: g -> -inf as s -> -inf and as s -> +inf; g(s_mid) > 0 for d >= 2.
    let lo0 = target - 1.0;
    let s0 = newton_bisect(g, ln_level_fn_deriv, lo0, s_mid);
    let hi1 = 2.0 * (-target) + 10.0;
    let s1 = newton_bisect(g, ln_level_fn_deriv, s_mid, hi1);
    Ok((s0.exp(), s1.exp()))
}

/// `|rho^2 (1+rho^2)^{-3/2} - 2/(pi d)|` at a candidate root.
pub fn level_residual(d: f64, rho_sq: f64) -> f64 {
    (rho_sq / (1.0 + rho_sq).powf(1.5) - level(d)).abs()
}

/// First closed-form brackets of the radii:
/// `2/(pi d - 3) <= rho0^2 <= 4/((pi d - 3) + sqrt((pi d - 3)^2 - 6))`
/// and `rho1 <= (pi d / 2)(1 - 6/((pi d)^2 - 6))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstBrackets {
    pub rho0_sq_lower: f64,
    pub rho0_sq_upper: f64,
    pub rho1_upper: f64,
}

pub fn first_brackets(d: f64) -> Result<FirstBrackets> {
    if !(d >= 2.0) {
        return Err(Error::OutOfDomain(format!("need d >= 2, got {d}")));
    }
    let a = PI * d - 3.0;
    let pd = PI * d;
    Ok(FirstBrackets {
        rho0_sq_lower: 2.0 / a,
        rho0_sq_upper: 4.0 / (a + (a * a - 6.0).sqrt()),
        rho1_upper: pd / 2.0 * (1.0 - 6.0 / (pd * pd - 6.0)),
    })
}

/// One application of the bracket-refining interval maps.
pub fn iterate_step(d: f64, b: RadiusBrackets) -> RadiusBrackets {
    let pd2 = (PI * d).powi(2);
    let q = (PI * d / 2.0).powi(2) - 3.0;
    let r0 = |x: f64| 2.0 * (3.0 + (9.0 + (1.0 + x.powi(3)) * (pd2 - 12.0)).sqrt()) / (pd2 - 12.0);
    let alpha = b.rho1_sq.lo;
    let rho1_lo = 0.5 * (q + (q * q - 12.0 - 4.0 / alpha).sqrt());
    let rho1_hi = 0.5 * (q + (q * q - 12.0).sqrt());
    RadiusBrackets {
        rho0_sq: Interval::new(r0(b.rho0_sq.lo).max(b.rho0_sq.lo), r0(b.rho0_sq.hi).min(b.rho0_sq.hi)),
        rho1_sq: Interval::new(rho1_lo.max(b.rho1_sq.lo), rho1_hi.min(b.rho1_sq.hi)),
    }
}

/// Iterates from `beta = 0`, `gamma = alpha = 2`; each step refines the previous.
pub fn iterate_brackets(d: f64, steps: usize) -> Result<RadiusBrackets> {
    if !(d >= 2.0) {
        return Err(Error::OutOfDomain(format!("need d >= 2, got {d}")));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let mut b = RadiusBrackets {
        rho0_sq: Interval::new(0.0, 2.0),
        rho1_sq: Interval::new(2.0, f64::INFINITY),
    };
    for _ in 0..steps {
        b = iterate_step(d, b);
    }
    Ok(b)
}

/// Brackets printed in the published tables for `d = 2..=6`.
pub fn published_brackets(d: u64) -> Option<RadiusBrackets> {
    let (a, b, c, e) = match d {
        2 => (0.714, 0.715, 6.374, 6.401),
        3 => (0.322, 0.323, 19.046, 19.050),
        4 => (0.212, 0.213, 36.395, 36.396),
        5 => (0.158, 0.159, 58.633, 58.634),
        6 => (0.1269, 0.1270, 85.7913, 85.7915),
        _ => return None,
    };
    Some(RadiusBrackets {
        rho0_sq: Interval::new(a, b),
        rho1_sq: Interval::new(c, e),
    })
}

/// `theta_rho` in `(0, pi/4]` with `sin(2 theta) = 2 (1+rho^2)^{3/2} / (d pi rho^2)`.
pub fn theta_rho(d: f64, rho: f64) -> Result<f64> {
    let s = sin_two_theta(d, rho);
    if s > 1.0 + 1e-12 {
        return Err(Error::OutOfLevelSet(format!(
            "rho = {rho} is outside [rho0, rho1] for d = {d}"
        )));
    }
    Ok(0.5 * s.min(1.0).asin())
}

fn sin_two_theta(d: f64, rho: f64) -> f64 {
    let r2 = rho * rho;
    2.0 * (1.0 + r2).powf(1.5) / (d * PI * r2)
}

/// Same as [`theta_rho`] but parametrised by `u = ln rho`, stable for huge `rho`.
fn theta_of_log(d: f64, u: f64) -> f64 {
    // sin 2theta = (2/(pi d)) * exp(-(2u - 1.5 ln(1 + e^{2u})))
    let s = (level(d).ln() - ln_level_fn(2.0 * u)).exp();
    0.5 * s.min(1.0).asin()
}

/// Closed-form contribution of the radii outside `[rho0, rho1]`.
pub fn outer_region_integral(d: f64, rho0_sq: f64, rho1_sq: f64) -> f64 {
    // 1 - (1+r)^{-1/2} = r / (sqrt(1+r) (1 + sqrt(1+r))), free of cancellation.
    let s0 = (1.0 + rho0_sq).sqrt();
    let inner = rho0_sq / (s0 * (1.0 + s0));
    PI * PI * d / 2.0 * (inner + 1.0 / (1.0 + rho1_sq).sqrt())
}

/// Break-down of the truncated density integral by region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityIntegral {
    pub outer: f64,
    pub sliver: f64,
    pub plateau: f64,
    pub value: f64,
    pub error: f64,
}

/// `int_{R^2} min(1, d a(t) / 4 pi) dt`, split into the outer radii (closed form),
/// the slivers below `theta_rho` and the plateau where the integrand is 1.
pub fn truncated_density_integral(d: f64) -> Result<DensityIntegral> {
    let (r0s, r1s) = solve_rho_sq(d)?;
    let outer = outer_region_integral(d, r0s, r1s);
    let u0 = 0.5 * r0s.ln();
    let u1 = 0.5 * r1s.ln();
    let um = SQRT_2.ln();
    let breaks = [u0, 0.5 * (u0 + um), um, 0.5 * (um + u1), u1];
    // In u = ln rho, d rho / rho = du.
    let sliver = quadrature::integrate_with_breaks(
        |u| {
            let th = theta_of_log(d, u);
            4.0 * th / (2.0 * th).sin()
        },
        &breaks,
        1e-13,
        1e-13,
        4000,
    );
    let plateau = quadrature::integrate_with_breaks(
        |u| {
            let th = theta_of_log(d, u);
            -2.0 * th.tan().ln()
        },
        &breaks,
        1e-13,
        1e-13,
        4000,
    );
    Ok(DensityIntegral {
        outer,
        sliver: sliver.value,
        plateau: plateau.value,
        value: outer + sliver.value + plateau.value,
        error: sliver.error + plateau.error,
    })
}

/// `theta` at both radii; both equal `pi/4` up to rounding.
pub fn theta_rho_at_root(d: f64) -> Result<(f64, f64)> {
    let (r0, r1) = solve_rho(d)?;
    Ok((theta_rho(d, r0)?, theta_rho(d, r1)?))
}

fn expupper_terms(d: f64, rho0_sq: f64, rho1_sq: f64) -> [f64; 6] {
    let ln_r0 = 0.5 * rho0_sq.ln();
    let ln_r1 = 0.5 * rho1_sq.ln();
    let l = ln_r1 - ln_r0;
    let s0 = (1.0 + rho0_sq).sqrt();
    [
        (2.0 * d.ln() + 2.0 * PI.ln() + PI) * l,
        -ln_r1 * ln_r1,
        -2.0 * ln_r0 * ln_r0,
        3.0 * rho0_sq.ln_1p() * ln_r0,
        PI * PI * d / 2.0 * rho0_sq / (s0 * (1.0 + s0)),
        PI * PI * d / 2.0 / (1.0 + rho1_sq).sqrt(),
    ]
}

/// The closed-form upper bound evaluated at the exact radii.
pub fn expupper_bound(d: f64) -> Result<f64> {
    let (r0s, r1s) = solve_rho_sq(d)?;
    Ok(expupper_terms(d, r0s, r1s).iter().sum())
}

/// The same expression, each term maximised separately over the given brackets
/// (sampled on a 33 x 33 grid, every term being monotone there). This is how
/// rounded published brackets turn into a certified numeric bound.
pub fn expupper_bound_over(d: f64, b: RadiusBrackets) -> f64 {
    let n = 33;
    let mut best = [f64::NEG_INFINITY; 6];
    for i in 0..n {
        let r0s = b.rho0_sq.lo + b.rho0_sq.width() * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let r1s = b.rho1_sq.lo + b.rho1_sq.width() * j as f64 / (n - 1) as f64;
            let t = expupper_terms(d, r0s, r1s);
            for k in 0..6 {
                best[k] = best[k].max(t[k]);
            }
        }
    }
    best.iter().sum()
}

/// `1.5 ln^2 d + 8.3752 ln d + 8.5607`, valid for `d >= 6`.
pub fn upperboundall_formula(d: f64) -> f64 {
    let l = d.ln();
    1.5 * l * l + 8.3752 * l + 8.5607
}

/// `1.5 ln^2 d + 9 ln d + 9`.
pub fn mainbound_formula(d: f64) -> f64 {
    let l = d.ln();
    1.5 * l * l + 9.0 * l + 9.0
}

/// Half the expected multiarea, `pi^2 d / 2`.
pub fn multiarea_half(d: f64) -> f64 {
    PI * PI * d / 2.0
}

/// `min(pi^2 d/2, mainbound, upperboundall for d >= 6)`.
pub fn global_bound(d: f64) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(Error::OutOfDomain(format!("need d >= 1, got {d}")));
    }
    let mut v = multiarea_half(d).min(mainbound_formula(d));
    if d >= 6.0 {
        v = v.min(upperboundall_formula(d));
    }
    Ok(v)
}

/// Leading behaviour `1.5 ln^2 d + 3 (1 + ln pi) ln d` of the truncated integral.
pub fn asymptotic_law(d: f64) -> f64 {
    let l = d.ln();
    1.5 * l * l + 3.0 * (1.0 + PI.ln()) * l
}

/// `(ln rho0 + ln d / 2 + ln(pi/2)/2, ln rho1 - ln d - ln(pi/2))`, both `O(1/d)`.
pub fn lnrho_asymptotics(d: f64) -> Result<(f64, f64)> {
    let (r0s, r1s) = solve_rho_sq(d)?;
    let half_pi_ln = (PI / 2.0).ln();
    Ok((
        0.5 * r0s.ln() + 0.5 * d.ln() + 0.5 * half_pi_ln,
        0.5 * r1s.ln() - d.ln() - half_pi_ln,
    ))
}

/// Refined closed-form brackets of both radii, valid for `d >= 6`.
pub fn refined_brackets_hold(d: f64) -> Result<bool> {
    let (r0s, r1s) = solve_rho_sq(d)?;
    let l = level(d);
    let q = (PI * d / 2.0).powi(2);
    Ok(l <= r0s && r0s <= 1.2138 * l && 0.9658 * q <= r1s && r1s <= q)
}

/// Assembles every bound for one degree.
pub fn bound_report(d: u64) -> Result<BoundReport> {
    let df = d as f64;
    let (r0s, r1s) = solve_rho_sq(df)?;
    let brackets = published_brackets(d).unwrap_or(iterate_brackets(df, 60)?);
    let integral = truncated_density_integral(df)?;
    Ok(BoundReport {
        d,
        rho0_sq_lo: brackets.rho0_sq.lo,
        rho0_sq_hi: brackets.rho0_sq.hi,
        rho1_sq_lo: brackets.rho1_sq.lo,
        rho1_sq_hi: brackets.rho1_sq.hi,
        rho0_sq: r0s,
        rho1_sq: r1s,
        integral_value: integral.value,
        expupper_value: expupper_bound(df)?,
        expupper_tabulated: published_brackets(d).map(|b| expupper_bound_over(df, b)),
        upperboundall_value: upperboundall_formula(df),
        mainbound_value: mainbound_formula(df),
        multiarea_half: multiarea_half(df),
        global_bound: global_bound(df)?,
    })
}
