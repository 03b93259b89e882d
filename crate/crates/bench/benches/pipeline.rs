use criterion::{criterion_group, criterion_main, Criterion};
use sldens::appell::Method;
use sldens::density::{auto_density, density_at};
use sldens::frobenius::FrobeniusExpansion;
use sldens::spectral::rho_grid;
use sldens_bench::{barrier, bessel_one, hydrogen};
use std::hint::black_box;

fn bench_frobenius(c: &mut Criterion) {
    let p = hydrogen();
    c.bench_function("frobenius_build_eval", |b| {
        b.iter(|| {
            let fe = FrobeniusExpansion::build(&p, black_box(1.0), 200).unwrap();
            black_box(fe.eval(1.5).unwrap().phi)
        })
    });
}

fn bench_density_at(c: &mut Criterion) {
    let p = hydrogen();
    c.bench_function("density_f3_x100", |b| {
        b.iter(|| black_box(density_at(&p, black_box(1.0), 100.0, Method::F3).unwrap().value))
    });
    c.bench_function("density_f6_x100", |b| {
        b.iter(|| black_box(density_at(&p, black_box(1.0), 100.0, Method::FN(6)).unwrap().value))
    });
    let bp = barrier();
    c.bench_function("density_barrier_f3_x20", |b| {
        b.iter(|| black_box(density_at(&bp, black_box(10.0), 20.0, Method::F3).unwrap().value))
    });
}

fn bench_auto_density(c: &mut Criterion) {
    let p = bessel_one();
    c.bench_function("auto_density_bessel_1e-8", |b| {
        b.iter(|| black_box(auto_density(&p, black_box(2.0), 1e-8).unwrap().value))
    });
}

fn bench_rho(c: &mut Criterion) {
    let p = bessel_one();
    let grid = [1.0, 2.0, 4.0];
    let mut g = c.benchmark_group("rho");
    g.sample_size(10);
    g.bench_function("rho_grid_bessel_tol1e-6", |b| {
        b.iter(|| black_box(rho_grid(&p, &grid, 0.0, 1e-6).unwrap().rho[2]))
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_frobenius,
    bench_density_at,
    bench_auto_density,
    bench_rho
);
criterion_main!(benches);
