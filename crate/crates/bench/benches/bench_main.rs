use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ptsusy::elliptic::{elliptic_pair, invariants_from, wp, zero_mode};
use ptsusy::sl2c::{partner_pair, potential_vm};
use ptsusy::spectral::{find_spectrum, shoot, Boundary, SpectralProblem};
use ptsusy::{Case, EllipticParams, Grid, Sl2cFamily};

fn weierstrass(c: &mut Criterion) {
    let p = EllipticParams::lemniscatic();
    let d = invariants_from(&p).unwrap();
    c.bench_function("invariants_from", |b| {
        b.iter(|| invariants_from(black_box(&p)))
    });
    c.bench_function("wp_single_point", |b| b.iter(|| wp(black_box(0.7), &d)));
    let grid = Grid::open(0.0, d.domain_end().unwrap(), 2001).unwrap();
    c.bench_function("elliptic_pair_2001", |b| {
        b.iter(|| elliptic_pair(&p, &d, black_box(&grid)))
    });
    let fine = Grid::open(0.0, d.domain_end().unwrap(), 8000).unwrap();
    c.bench_function("zero_mode_8000", |b| {
        b.iter(|| zero_mode(&p, &d, black_box(&fine)))
    });
}

fn families(c: &mut Criterion) {
    let fam = Sl2cFamily::new(Case::I, 2.0, 0.0, 0.5).unwrap();
    let grid = Grid::new(-12.0, 12.0, 2401).unwrap();
    c.bench_function("partner_pair_2401", |b| {
        b.iter(|| partner_pair(black_box(&fam), &grid))
    });
}

fn spectra(c: &mut Criterion) {
    let fam = Sl2cFamily::new(Case::I, 2.0, 0.0, 0.5).unwrap();
    let grid = Grid::new(-12.0, 12.0, 4001).unwrap();
    let v = potential_vm(&fam, &grid).unwrap();
    let problem = SpectralProblem::new(v, Boundary::DirichletBoth, (-3.0, -0.01), 300).unwrap();
    c.bench_function("shoot_4001", |b| {
        b.iter(|| shoot(&problem, black_box(-0.25)))
    });
    let mut group = c.benchmark_group("find_spectrum");
    group.sample_size(10);
    group.bench_function("scarf_m2_4001", |b| {
        b.iter(|| find_spectrum(black_box(&problem)))
    });
    group.finish();
}

criterion_group!(benches, weierstrass, families, spectra);
criterion_main!(benches);
