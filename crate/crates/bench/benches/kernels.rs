use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use epkit::metric::crypto_residual;
use epkit::poly::discriminant_in_s;
use epkit::rational::int;
use epkit::spectra::sweep;
use epkit::{secular_on_path, CouplingVector, Grid, MetricBundle, ModelSpec, PathSpec};

fn nine_site() -> PathSpec {
    PathSpec::parse(9, "t,-t,t,-9/10", int(0)).unwrap()
}

fn secular(c: &mut Criterion) {
    let path = nine_site();
    c.bench_function("secular_on_path/N=9,k=4", |b| b.iter(|| secular_on_path(black_box(&path))));
}

fn discriminant(c: &mut Criterion) {
    let p = secular_on_path(&nine_site());
    c.bench_function("discriminant_in_s/N=9,k=4", |b| b.iter(|| discriminant_in_s(black_box(&p)).unwrap()));
}

fn sweep_grid(c: &mut Criterion) {
    let path = nine_site();
    let grid: Grid = "-3/2:3/2:1/100".parse().unwrap();
    c.bench_function("sweep/N=9,301 points", |b| b.iter(|| sweep(black_box(&path), &grid).unwrap()));
}

fn residual(c: &mut Criterion) {
    let lambdas = CouplingVector::parse(&["1/2", "-1/3", "1/5", "-1/7", "1/11"]).unwrap();
    let spec = ModelSpec::BoundaryWell { n: 40, shift: int(0), couplings: lambdas.as_slice().to_vec() };
    let h = spec.build().unwrap();
    let theta = MetricBundle::build(&lambdas, 40, Some(int(0))).unwrap().theta();
    c.bench_function("crypto_residual/N=40", |b| b.iter(|| crypto_residual(black_box(&h), &theta).unwrap()));
}

criterion_group!(benches, secular, discriminant, sweep_grid, residual);
criterion_main!(benches);
