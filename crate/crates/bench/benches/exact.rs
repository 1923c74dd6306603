use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nc_core::algebra::finite::{matrix_algebra, truncated_poly};
use nc_core::algebra::Bimodule;
use nc_core::calculi::omega_u;
use nc_core::hochschild::{basic_cohomology, hochschild_cohomology};
use nc_core::connections::flat_classify;

fn hochschild(c: &mut Criterion) {
    let m2 = matrix_algebra(2).unwrap();
    let reg = Bimodule::regular(&m2);
    c.bench_function("hochschild M_2 to degree 3", |b| {
        b.iter(|| hochschild_cohomology(black_box(&m2), &reg, 3).unwrap())
    });
    let x3 = truncated_poly(3).unwrap();
    let reg3 = Bimodule::regular(&x3);
    c.bench_function("hochschild C[x]/(x^3) to degree 3", |b| {
        b.iter(|| hochschild_cohomology(black_box(&x3), &reg3, 3).unwrap())
    });
    c.bench_function("basic cohomology M_2 to degree 4", |b| b.iter(|| basic_cohomology(black_box(&m2), 4).unwrap()));
}

fn calculi(c: &mut Criterion) {
    let m2 = matrix_algebra(2).unwrap();
    c.bench_function("universal calculus M_2 to degree 4", |b| b.iter(|| omega_u(black_box(&m2), 4).unwrap()));
    c.bench_function("flat classes n=2 K=4", |b| b.iter(|| flat_classify(2, black_box(4), None, true).unwrap()));
}

criterion_group!(benches, hochschild, calculi);
criterion_main!(benches);
