use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mctwist::dg::check_dga;
use mctwist::holonomy::{pexp, Matrix, SampledMatrixPath};
use mctwist::linalg::smith_normal_form;
use mctwist::perturbation::minimal_model;
use mctwist::random::{random_local_system, random_reduced_module};
use mctwist::simplicial::{circle, cochain_algebra, local_system_cohomology, torus7};
use mctwist::{ExactMatrix, Ring};

fn linear_algebra(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows: Vec<Vec<i64>> = (0..24).map(|_| (0..24).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    let m = ExactMatrix::from_i64(Ring::Integers, &rows);
    c.bench_function("smith 24x24", |b| b.iter(|| smith_normal_form(black_box(&m)).unwrap()));
}

fn algebras(c: &mut Criterion) {
    let x = torus7();
    c.bench_function("check_dga torus7 over Z", |b| {
        b.iter(|| check_dga(&cochain_algebra(black_box(&x), Ring::Integers, 2).unwrap()))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ls = random_local_system(&x, Ring::Rationals, 2, &mut rng).unwrap();
    c.bench_function("twisted cohomology torus7 rank 2", |b| {
        b.iter(|| local_system_cohomology(black_box(&ls)).unwrap())
    });
}

fn transfer(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = random_reduced_module(&circle(3), Ring::prime_field(5).unwrap(), 6, (-3, 3), &mut rng).unwrap();
    c.bench_function("minimal model circle3 dim 6", |b| b.iter(|| minimal_model(black_box(&m)).unwrap()));
}

fn holonomy(c: &mut Criterion) {
    let y = SampledMatrixPath::from_fn(20_000, |t| Matrix::from_row_slice(2, 2, &[t, 1.0, -1.0, t * t])).unwrap();
    c.bench_function("pexp 10^4 RK4 steps", |b| b.iter(|| pexp(black_box(&y), 1.0).unwrap()));
}

criterion_group!(benches, linear_algebra, algebras, transfer, holonomy);
criterion_main!(benches);
