use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use vortexpack::specfun::{bessel_j, bessel_k_ratio, log_bessel_k_scaled, log_gamma};

fn bessel_k(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_bessel_k_scaled");
    // one point per evaluation regime, plus the l = 1000, 1 nm corner
    for (nu, z) in [(2.5, 3.0), (1.3, 0.5), (1.3, 200.0), (40.3, 30.0), (5.3, 7.0), (1001.0, 1.34e7)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{nu}@{z}")), &(nu, z), |b, &(nu, z)| {
            b.iter(|| log_bessel_k_scaled(black_box(nu), black_box(z)))
        });
    }
    group.finish();
    c.bench_function("bessel_k_ratio 1000@1.34e7", |b| {
        b.iter(|| bessel_k_ratio(black_box(1000.0), black_box(1.34e7)))
    });
}

fn others(c: &mut Criterion) {
    c.bench_function("log_gamma 1001", |b| b.iter(|| log_gamma(black_box(1001.0))));
    c.bench_function("bessel_j 20@35", |b| b.iter(|| bessel_j(black_box(20), black_box(35.0))));
}

criterion_group!(benches, bessel_k, others);
criterion_main!(benches);
