use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use vortexpack::field::{fourier_oracle, psi_exact};
use vortexpack::observables::{mean_four_momentum_quadrature, mean_pperp_quadrature};
use vortexpack::quadrature::{integrate_1d, Interval};
use vortexpack::{IntegrandSample, PacketParams, QuadratureSpec, SpacetimePoint};

fn raw(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    c.bench_function("integrate_1d gaussian tail", |b| {
        b.iter(|| integrate_1d(|x: f64| IntegrandSample::new(-x * x, 1.0), Interval::UpperInfinite(black_box(0.0)), &spec))
    });
}

fn observables(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let p = PacketParams::natural(5, 0.1, 1.0).unwrap();
    c.bench_function("mean four-momentum by quadrature", |b| {
        b.iter(|| mean_four_momentum_quadrature(black_box(&p), &spec))
    });
    let wide = PacketParams::natural(400, 0.01, 0.0).unwrap();
    c.bench_function("mean p_perp by quadrature, l = 400", |b| {
        b.iter(|| mean_pperp_quadrature(black_box(&wide), &spec))
    });
}

fn field(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let p = PacketParams::natural(3, 0.3, 1.0).unwrap();
    let x = SpacetimePoint::new(3.0, 5.0, 1.0, -2.0);
    c.bench_function("exact field", |b| b.iter(|| psi_exact(black_box(&p), black_box(&x))));
    let mut group = c.benchmark_group("fourier");
    group.sample_size(10);
    group.bench_function("fourier oracle", |b| b.iter(|| fourier_oracle(black_box(&p), black_box(&x), &spec)));
    group.finish();
}

criterion_group!(benches, raw, observables, field);
criterion_main!(benches);
