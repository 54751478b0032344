use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hhi_forge_bench::{rng, toy_slice};
use hhi_forge_core::euclid::{
    assemble_cylinder, calderon_elliptic, divergence_identity_check, extend_to_disk, gluing_test_data, hhi_apply,
    RandomSmoothMetric,
};

fn cylinder(c: &mut Criterion) {
    let slice = toy_slice(8, 0.0);
    let mut group = c.benchmark_group("cylinder");
    group.sample_size(10);
    for n_s in [64, 128, 256] {
        group.bench_with_input(BenchmarkId::new("assemble", n_s), &n_s, |b, &n_s| {
            b.iter(|| assemble_cylinder(black_box(&slice), 1.0, n_s).unwrap())
        });
        let prob = assemble_cylinder(&slice, 1.0, n_s).unwrap();
        group.bench_with_input(BenchmarkId::new("calderon", n_s), &prob, |b, prob| {
            b.iter(|| calderon_elliptic(black_box(prob)).unwrap())
        });
    }
    group.finish();
}

fn disk(c: &mut Criterion) {
    let mut group = c.benchmark_group("disk");
    group.sample_size(10);
    for n in [16, 32] {
        let slice = toy_slice(n, 0.0);
        group.bench_with_input(BenchmarkId::new("extend", n), &slice, |b, slice| {
            b.iter(|| extend_to_disk(black_box(slice), 2.0 * std::f64::consts::PI).unwrap())
        });
        let disk = extend_to_disk(&slice, 2.0 * std::f64::consts::PI).unwrap();
        let data = gluing_test_data(&disk.boundary_points(), 0.1, 0.5);
        group.bench_with_input(BenchmarkId::new("hhi_apply", n), &disk, |b, disk| {
            b.iter(|| hhi_apply(disk, black_box(&data[0])).unwrap())
        });
    }
    group.finish();
}

fn divergence(c: &mut Criterion) {
    let metric = RandomSmoothMetric::sample(&mut rng(1));
    let (m, field) = metric.sample_grid(64).unwrap();
    c.bench_function("divergence 64x64", |b| b.iter(|| divergence_identity_check(black_box(&m), &field).unwrap()));
}

criterion_group!(benches, cylinder, disk, divergence);
criterion_main!(benches);
