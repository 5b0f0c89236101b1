//! Adaptive Gauss-Kronrod (7, 15) quadrature in one and two dimensions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Nodes and Kronrod / Gauss weights on [-1, 1] as 15-vectors.
fn rule() -> ([f64; 15], [f64; 15], [f64; 15]) {
    let mut x = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for j in 0..7 {
        x[j] = -XGK[j];
        x[14 - j] = XGK[j];
        wk[j] = WGK[j];
        wk[14 - j] = WGK[j];
    }
    x[7] = 0.0;
    wk[7] = WGK[7];
    for (k, j) in [1usize, 3, 5].iter().enumerate() {
        wg[*j] = WG[k];
        wg[14 - *j] = WG[k];
    }
    wg[7] = WG[3];
    (x, wk, wg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// One GK15 panel: (Kronrod value, |Kronrod - Gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (x, wk, wg) = rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = 0.0;
    let mut g = 0.0;
    for i in 0..15 {
        let v = f(c + h * x[i]);
        k += wk[i] * v;
        g += wg[i] * v;
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`, splitting the worst panel
/// until `error <= max(abs_tol, rel_tol * |value|)` or `max_panels` is reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_panels: usize) -> QuadResult {
    integrate_with_breaks(f, &[a, b], abs_tol, rel_tol, max_panels)
}

/// Same as [`integrate`], starting from the panels delimited by `breaks`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        evals += 15;
        value += v;
        error += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    let mut converged = error <= abs_tol.max(rel_tol * value.abs());
    while !converged && heap.len() < max_panels {
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, m);
        let (v2, e2) = gk15(&f, m, worst.b);
        evals += 30;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: worst.b,
            value: v2,
            error: e2,
        });
        converged = error <= abs_tol.max(rel_tol * value.abs());
    }
    // Re-sum to shed the drift of the running updates.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    QuadResult {
        value,
        error,
        evaluations: evals,
        converged,
    }
}

struct Rect {
    x: (f64, f64),
    y: (f64, f64),
    value: f64,
    error: f64,
}

impl PartialEq for Rect {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Rect {}
impl PartialOrd for Rect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Rect {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Tensor GK15 x GK15 on one rectangle: (value, error estimate).
fn gk15_2d<F: Fn(f64, f64) -> f64>(f: &F, x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let (n, wk, wg) = rule();
    let cx = 0.5 * (x.0 + x.1);
    let hx = 0.5 * (x.1 - x.0);
    let cy = 0.5 * (y.0 + y.1);
    let hy = 0.5 * (y.1 - y.0);
    let mut k = 0.0;
    let mut g = 0.0;
    for i in 0..15 {
        let xi = cx + hx * n[i];
        for j in 0..15 {
            let v = f(xi, cy + hy * n[j]);
            k += wk[i] * wk[j] * v;
            g += wg[i] * wg[j] * v;
        }
    }
    let s = hx * hy;
    (k * s, ((k - g) * s).abs())
}

/// Globally adaptive integration over the rectangle `x.0..x.1` by `y.0..y.1`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x: (f64, f64),
    y: (f64, f64),
    abs_tol: f64,
    rel_tol: f64,
    max_rects: usize,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15_2d(&f, x, y);
    let mut evals = 225;
    let mut value = v;
    let mut error = e;
    heap.push(Rect {
        x,
        y,
        value: v,
        error: e,
    });
    let mut converged = error <= abs_tol.max(rel_tol * value.abs());
    while !converged && heap.len() < max_rects {
        let worst = heap.pop().expect("non-empty");
        let mx = 0.5 * (worst.x.0 + worst.x.1);
        let my = 0.5 * (worst.y.0 + worst.y.1);
        let children = [
            ((worst.x.0, mx), (worst.y.0, my)),
            ((mx, worst.x.1), (worst.y.0, my)),
            ((worst.x.0, mx), (my, worst.y.1)),
            ((mx, worst.x.1), (my, worst.y.1)),
        ];
        value -= worst.value;
        error -= worst.error;
        for (cx, cy) in children {
            let (v, e) = gk15_2d(&f, cx, cy);
            evals += 225;
            value += v;
            error += e;
            heap.push(Rect {
                x: cx,
                y: cy,
                value: v,
                error: e,
            });
        }
        converged = error <= abs_tol.max(rel_tol * value.abs());
    }
    let value: f64 = heap.iter().map(|r| r.value).sum();
    let error: f64 = heap.iter().map(|r| r.error).sum();
    QuadResult {
        value,
        error,
        evaluations: evals,
        converged,
    }
}
