use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use eurelax_bench::SIZES;
use eurelax_core::bounds::eulerian_diagonal_pencil;
use eurelax_core::spectra::{extreme_roots, psd_interval_left};
use eurelax_core::{bound_report, multivariate_eulerian, psd_certificate, univariate_eulerian, VectorKind, YPolicy};

fn eulerian(c: &mut Criterion) {
    let mut g = c.benchmark_group("multivariate_eulerian");
    for n in [6usize, 8, 10] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| multivariate_eulerian(black_box(n))));
    }
    g.finish();
}

fn psd(c: &mut Criterion) {
    let mut g = c.benchmark_group("psd");
    for n in SIZES {
        let p = eulerian_diagonal_pencil(n);
        g.bench_with_input(BenchmarkId::new("certificate_a0", n), &p, |b, p| b.iter(|| psd_certificate(black_box(&p.a0))));
        g.bench_with_input(BenchmarkId::new("interval_left", n), &p, |b, p| b.iter(|| psd_interval_left(black_box(p), 64)));
    }
    g.finish();
}

fn roots(c: &mut Criterion) {
    let mut g = c.benchmark_group("extreme_roots");
    for n in SIZES {
        let a = univariate_eulerian(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| extreme_roots(black_box(a), 128)));
    }
    g.finish();
}

fn report(c: &mut Criterion) {
    let mut g = c.benchmark_group("bound_report");
    g.sample_size(10);
    for n in SIZES {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| bound_report(black_box(n), VectorKind::Old, &YPolicy::Paper, 128))
        });
    }
    g.finish();
}

criterion_group!(benches, eulerian, psd, roots, report);
criterion_main!(benches);
