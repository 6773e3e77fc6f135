use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use planar_inv_bench::{curves, windows};
use planar_inv_core::exactness::{verify_exactness, verify_window_rank};
use planar_inv_core::moves::JSite;
use planar_inv_core::{compute, find_crossings, make_j_move, ToleranceConfig};

fn crossings(c: &mut Criterion) {
    let mut g = c.benchmark_group("crossings");
    for (name, curve) in curves() {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &curve, |b, curve| {
            b.iter(|| find_crossings(black_box(curve)).unwrap())
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let mut g = c.benchmark_group("compute");
    for (name, curve) in curves() {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &curve, |b, curve| {
            b.iter(|| compute(black_box(curve), &cfg).unwrap())
        });
    }
    g.finish();
}

fn tangency_move(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let (_, curve) = curves().into_iter().find(|(n, _)| n == "base3").unwrap();
    let site = JSite {
        base: curve.vertex(0),
        side: 1,
        half_width: None,
    };
    c.bench_function("j_move/base3", |b| {
        b.iter(|| make_j_move(black_box(&curve), &site, &cfg))
    });
}

fn elimination(c: &mut Criterion) {
    let mut g = c.benchmark_group("elimination");
    g.sample_size(20);
    for w in windows() {
        let id = format!("n{}_k{}_l{}", w.n, w.k, w.l);
        g.bench_with_input(BenchmarkId::new("rank", &id), &w, |b, w| {
            b.iter(|| verify_window_rank(black_box(w)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exactness", &id), &w, |b, w| {
            b.iter(|| verify_exactness(black_box(w), 4, 1).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, crossings, pipeline, tangency_move, elimination);
criterion_main!(benches);
