//! Monte Carlo checks of the amoeba estimators against exact identities and
//! upper bounds. Sample sizes are kept small enough for a single core.

use amoeba_core::amoeba::{
    crofton_check, default_window, estimate_area, estimate_area_and_multiarea, estimate_p, membership_oracle_dense,
    p_upper_bound, toric_symmetry_check, torus_intersection_count, SliceSweepConfig,
};
use amoeba_core::bounds::{expupper_bound, global_bound};
use amoeba_core::kostlan::sample_poly;
use amoeba_core::{LogPoint, RngStream, TorusRadii};
use std::f64::consts::PI;

fn cfg() -> SliceSweepConfig {
    SliceSweepConfig::default()
}

fn oracle_agreement(d: usize, n: usize, seed: u64) -> (usize, usize) {
    let mut rng = RngStream::new(seed, 0);
    let mut agree = 0;
    let mut compared = 0;
    for _ in 0..n {
        let p = sample_poly(d, &mut rng);
        let t = LogPoint::new(rng.uniform_in(-1.5, 1.5), rng.uniform_in(-1.5, 1.5));
        let v = torus_intersection_count(&p, t, &cfg()).unwrap();
        if v.flagged_tangency {
            continue;
        }
        let o = membership_oracle_dense(&p, t, 256).unwrap();
        compared += 1;
        agree += usize::from(o.member == v.member);
    }
    (agree, compared)
}

#[test]
fn sweep_agrees_with_dense_oracle() {
    for (d, seed) in [(3, 1), (5, 2)] {
        let (agree, compared) = oracle_agreement(d, 150, seed);
        assert!(compared >= 145);
        assert!(agree as f64 >= 0.99 * compared as f64, "d = {d}: {agree}/{compared}");
    }
}

#[test]
fn crofton_mean_count() {
    let rng = RngStream::new(20, 0);
    let r = crofton_check(2, TorusRadii::new(1.0, 1.0).unwrap(), 20_000, &cfg(), &rng).unwrap();
    assert!((r.expected - 4.0 * PI / (3.0 * 3f64.sqrt())).abs() < 1e-12);
    assert!(r.agrees, "{r:?}");
    let r = crofton_check(3, TorusRadii::new(1.0, 1.0).unwrap(), 10_000, &cfg(), &rng).unwrap();
    assert!((r.expected - 2.0 * PI / 3f64.sqrt()).abs() < 1e-12);
    assert!(r.agrees, "{r:?}");
    let r = crofton_check(2, TorusRadii::new(0.5, 2.0).unwrap(), 20_000, &cfg(), &rng).unwrap();
    assert!(r.agrees, "{r:?}");
    let r = crofton_check(2, TorusRadii::new(1e-6, 1.0).unwrap(), 2_000, &cfg(), &rng).unwrap();
    assert!(r.expected < 1e-5 && r.estimate.mean == 0.0);
}

#[test]
fn multiarea_identity_and_area_bounds() {
    let rng = RngStream::new(21, 0);
    for (d, n) in [(2usize, 20_000u64), (3, 10_000)] {
        let (area, multi) = estimate_area_and_multiarea(d, n, default_window(d), &cfg(), &rng).unwrap();
        let target = PI * PI * d as f64;
        assert!(
            (multi.value - target).abs() <= 3.0 * multi.stderr + multi.tail_bound,
            "{multi:?}"
        );
        // Two points of the curve over every amoeba point.
        assert!(multi.value - multi.tail_bound >= 2.0 * (area.value - area.tail_bound) - 1e-9);
        assert!(area.value - 3.0 * area.stderr <= target / 2.0, "{area:?}");
        assert!(area.value >= 0.0);
    }
    let area = estimate_area(5, 3_000, default_window(5), &cfg(), &rng).unwrap();
    let bound = expupper_bound(5.0).unwrap();
    assert!(area.value - 3.0 * area.stderr <= bound, "{area:?}");
    assert!(area.value - 3.0 * area.stderr <= global_bound(5.0).unwrap());
}

#[test]
fn pointwise_probability_below_density_bound() {
    let mut pick = RngStream::new(22, 0);
    for d in [2usize, 3] {
        for k in 0..8 {
            let t = LogPoint::new(pick.uniform_in(-3.0, 3.0), pick.uniform_in(-3.0, 3.0));
            let e = estimate_p(t, d, 1_000, &cfg(), &RngStream::new(22, k + 1)).unwrap();
            assert!(
                e.value <= p_upper_bound(d, t) + 3.0 * e.stderr + 1e-12,
                "d = {d}, t = {t:?}: {e:?}"
            );
        }
    }
    // Far in the tail the torus is almost never hit.
    let t = LogPoint::new(-12.0, -12.0);
    let e = estimate_p(t, 3, 500, &cfg(), &RngStream::new(22, 99)).unwrap();
    assert_eq!(e.value, 0.0);
}

#[test]
fn origin_probability_grows_with_degree() {
    let t = LogPoint::new(0.0, 0.0);
    let mut prev: Option<amoeba_core::amoeba::AmoebaMeasureEstimate> = None;
    for (d, n) in [(2usize, 2_000u64), (4, 1_000), (8, 500), (16, 200)] {
        let e = estimate_p(t, d, n, &cfg(), &RngStream::new(23, d as u64)).unwrap();
        if let Some(p) = prev {
            let se = e.stderr.hypot(p.stderr);
            assert!(e.value >= p.value - 3.0 * se, "d = {d}: {} after {}", e.value, p.value);
        }
        prev = Some(e);
    }
}

#[test]
fn toric_symmetry() {
    let rng = RngStream::new(24, 0);
    let r = toric_symmetry_check(3, LogPoint::new(-0.5, -0.3), 4_000, &cfg(), &rng).unwrap();
    assert!(r.holds, "{r:?}");
}

#[test]
fn estimates_ignore_thread_count() {
    let rng = RngStream::new(25, 0);
    let run = || estimate_area_and_multiarea(3, 600, default_window(3), &cfg(), &rng).unwrap();
    let a = run();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(a, b);
}
