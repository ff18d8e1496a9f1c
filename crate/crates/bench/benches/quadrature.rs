//! Benchmarks for the quadrature engines and the weighted one-particle
//! integral that dominates every ideal-gas observable.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use relgas_core::constants::{GasSpec, PhysicalConstants};
use relgas_core::geometry::{Region, Spacetime};
use relgas_core::quad::{gauss_legendre, integrate_adaptive, log_radial_volume_integral};
use relgas_core::thermo::weighted_q1;

fn bench_integrate_adaptive(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_adaptive");
    // Smooth integrand: one panel suffices.
    group.bench_function("smooth_exp", |b| {
        b.iter(|| integrate_adaptive(|x| (-x * x).exp(), 0.0, black_box(5.0), 0.0, 1e-12).unwrap());
    });
    // Oscillatory integrand: forces recursive panel splitting.
    group.bench_function("oscillatory_cos_40x", |b| {
        b.iter(|| {
            integrate_adaptive(|x| (40.0 * x).cos() * (-x).exp(), 0.0, black_box(10.0), 0.0, 1e-12)
                .unwrap()
        });
    });
    group.finish();
}

fn bench_gauss_legendre(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_legendre_nodes");
    for &n in &[16usize, 64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gauss_legendre(black_box(n)));
        });
    }
    group.finish();
}

fn bench_log_radial_volume_integral(c: &mut Criterion) {
    // Log-domain radial integral with a steep (θ = 100) weight, the shape
    // that appears in every spherically symmetric occupation integral.
    c.bench_function("log_radial_volume_integral_steep", |b| {
        b.iter(|| {
            log_radial_volume_integral(|r| -100.0 * (1.0 + r * r).sqrt(), 0.0, black_box(1.0), 1e-10)
                .unwrap()
        });
    });
}

fn bench_weighted_q1(c: &mut Criterion) {
    let k = PhysicalConstants::natural();
    let gas = GasSpec::new(1.0, 0.2, -1.0).unwrap();
    let region = Region::ball(1.0).unwrap();

    let mut group = c.benchmark_group("weighted_q1");
    // Radial fast path (anti-de Sitter ball) versus the Cartesian
    // tensor-product path (Kerr circular-orbit frame).
    let ads = Spacetime::anti_de_sitter(-3.0).unwrap();
    group.bench_function("ads_ball_radial", |b| {
        b.iter(|| weighted_q1(black_box(&ads), &region, &gas, &k).unwrap());
    });
    let kerr = Spacetime::kerr_circular_orbit(1.0, 0.3, 20.0, &k).unwrap();
    group.bench_function("kerr_ball_cartesian", |b| {
        b.iter(|| weighted_q1(black_box(&kerr), &region, &gas, &k).unwrap());
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_integrate_adaptive,
    bench_gauss_legendre,
    bench_log_radial_volume_integral,
    bench_weighted_q1
);
criterion_main!(benches);
