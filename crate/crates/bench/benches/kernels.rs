use std::hint::black_box;

use amoeba_core::amoeba::{membership_oracle_dense, torus_intersection_count, SliceSweepConfig};
use amoeba_core::bounds::bound_report;
use amoeba_core::chart::{direct_chart_check, random_unitary, Translation};
use amoeba_core::kostlan::sample_poly;
use amoeba_core::{LogPoint, RngStream};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_poly");
    for d in [2usize, 5, 16] {
        let mut rng = RngStream::new(1, 0);
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| sample_poly(d, &mut rng))
        });
    }
    g.finish();
}

fn membership(c: &mut Criterion) {
    let cfg = SliceSweepConfig::default();
    let t = LogPoint::new(0.3, -0.2);
    let mut g = c.benchmark_group("torus_sweep");
    for d in [2usize, 5, 16] {
        let mut rng = RngStream::new(2, d as u64);
        let polys: Vec<_> = (0..64).map(|_| sample_poly(d, &mut rng)).collect();
        let mut i = 0;
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| {
                i = (i + 1) % polys.len();
                torus_intersection_count(&polys[i], t, &cfg)
            })
        });
    }
    g.finish();

    let p = sample_poly(3, &mut RngStream::new(3, 0));
    c.bench_function("dense_oracle/3", |b| {
        b.iter(|| membership_oracle_dense(black_box(&p), t, 256))
    });
}

fn charts(c: &mut Criterion) {
    let mut rng = RngStream::new(4, 0);
    let u = random_unitary(&mut rng);
    let p = sample_poly(8, &mut rng);
    c.bench_function("translation_build/8", |b| b.iter(|| Translation::new(8, black_box(&u))));
    let tr = Translation::new(8, &u);
    c.bench_function("translation_apply/8", |b| b.iter(|| tr.apply(black_box(&p))));
    let q = sample_poly(4, &mut rng);
    c.bench_function("direct_chart_check/4", |b| {
        b.iter(|| direct_chart_check(black_box(&q), 0.5, 64))
    });
}

fn bounds(c: &mut Criterion) {
    c.bench_function("bound_report/5", |b| b.iter(|| bound_report(black_box(5))));
    c.bench_function("bound_report/1e6", |b| b.iter(|| bound_report(black_box(1_000_000))));
}

criterion_group!(benches, sampling, membership, charts, bounds);
criterion_main!(benches);
