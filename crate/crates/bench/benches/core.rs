use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dirac_shell_core::boundary_ops::{assemble_Cz, assemble_cauchy};
use dirac_shell_core::corner_symbol::{delta_direct, m_of, DEFAULT_SYMBOL_TOL, DEFAULT_TRUNCATION};
use dirac_shell_core::special::{bessel_i0, k0k1};
use dirac_shell_core::{build_curve, discretize, Coupling, CurveSpec};

fn bessel(c: &mut Criterion) {
    let xs: Vec<f64> = (1..=256).map(|k| 0.05 * k as f64).collect();
    c.bench_function("k0k1/256 points", |b| b.iter(|| xs.iter().map(|&x| k0k1(black_box(x)).0).sum::<f64>()));
    c.bench_function("i0/256 points", |b| b.iter(|| xs.iter().map(|&x| bessel_i0(black_box(x))).sum::<f64>()));
}

fn assembly(c: &mut Criterion) {
    let coupling = Coupling::unit_mass(1.0, 0.0);
    let circle = build_curve(&CurveSpec::circle(1.0)).unwrap();
    let square = build_curve(&CurveSpec::square(1.0)).unwrap();
    let mut group = c.benchmark_group("assemble_Cz");
    group.sample_size(10);
    for n in [128, 256] {
        let g = discretize(&circle, n, 3.0).unwrap();
        group.bench_with_input(BenchmarkId::new("circle", n), &g, |b, g| b.iter(|| assemble_Cz(g, 0.3, &coupling).unwrap()));
    }
    let g = discretize(&square, 64, 3.0).unwrap();
    group.bench_with_input(BenchmarkId::new("square", 256), &g, |b, g| b.iter(|| assemble_Cz(g, 0.3, &coupling).unwrap()));
    group.finish();
    let g = discretize(&circle, 512, 3.0).unwrap();
    c.bench_function("assemble_cauchy/circle 512", |b| b.iter(|| assemble_cauchy(&g).unwrap()));
}

fn symbols(c: &mut Criterion) {
    c.bench_function("m_of/0.3π", |b| b.iter(|| m_of(black_box(0.3 * PI), 1e-13).unwrap()));
    let coupling = Coupling::unit_mass(1.0, 3.0);
    c.bench_function("delta_direct/0.7π, η=1", |b| {
        b.iter(|| delta_direct(black_box(0.7 * PI), 1.0, &coupling, DEFAULT_TRUNCATION, DEFAULT_SYMBOL_TOL).unwrap())
    });
}

criterion_group!(benches, bessel, assembly, symbols);
criterion_main!(benches);
