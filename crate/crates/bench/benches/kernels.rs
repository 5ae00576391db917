use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use oscillax::exponent::exponent_bruteforce;
use oscillax::planar::minor_via_paths;
use oscillax::{determinant, neville_factorize, IndexSet};
use oscillax_bench::{dense, network, oscillatory};

fn bench_determinant(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinant");
    for n in [4, 8, 16] {
        let a = dense(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| determinant(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bench_neville(c: &mut Criterion) {
    let mut group = c.benchmark_group("neville_factorize");
    for n in [4, 8, 12] {
        let (_, a) = oscillatory(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| neville_factorize(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bench_path_minor(c: &mut Criterion) {
    let mut group = c.benchmark_group("minor_via_paths");
    for n in [4, 8, 12] {
        let net = network(n, 2);
        let k = n / 2;
        let (src, snk) = (IndexSet::range(n - k + 1, n), IndexSet::range(1, k));
        group.bench_with_input(BenchmarkId::from_parameter(n), &net, |b, net| {
            b.iter(|| minor_via_paths(black_box(net), &src, &snk).unwrap())
        });
    }
    group.finish();
}

fn bench_exponent(c: &mut Criterion) {
    let mut group = c.benchmark_group("exponent_bruteforce");
    group.sample_size(10);
    for n in [3, 4, 5] {
        let (_, a) = oscillatory(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| exponent_bruteforce(black_box(a)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, bench_determinant, bench_neville, bench_path_minor, bench_exponent);
criterion_main!(kernels);
