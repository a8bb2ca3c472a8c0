use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use symh_bench::{alternating_walk, partition};
use symh_core::bounds::{verify, Theorem};
use symh_core::characters::{mn_value_unmemoized, CharacterEvaluator};
use symh_core::harmonic::{kronecker, q_norm_exact};
use symh_core::mixing::{product_mixing, spectral_l2_distance_sq};
use symh_core::CycleType;

fn characters(c: &mut Criterion) {
    let mut g = c.benchmark_group("characters");
    let lambda = partition("8,6,3,2,1");
    let ct: CycleType = "5,4,4,3,2,2".parse().unwrap();
    g.bench_function("mn_unmemoized/20", |b| b.iter(|| mn_value_unmemoized(black_box(&lambda), black_box(&ct))));
    for n in [10, 14] {
        g.bench_with_input(BenchmarkId::new("table_cold", n), &n, |b, &n| {
            b.iter(|| CharacterEvaluator::with_caps(1 << 20, 20).character_table(n).unwrap())
        });
    }
    g.finish();
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("norms");
    let lambda = partition("12,4,2");
    g.bench_function("q4/18", |b| b.iter(|| q_norm_exact(black_box(&lambda), 4).unwrap()));
    let (l, m, nu) = (partition("6,3,1"), partition("5,3,2"), partition("4,4,2"));
    g.bench_function("kronecker/10", |b| b.iter(|| kronecker(&l, &m, &nu).unwrap()));
    g.finish();
}

fn mixing(c: &mut Criterion) {
    let mut g = c.benchmark_group("mixing");
    let f = alternating_walk("9,1,1,1");
    g.bench_function("distance_l8/12", |b| b.iter(|| spectral_l2_distance_sq(black_box(&f), 8).unwrap()));
    let set: Vec<CycleType> = vec!["11,1,1,1".parse().unwrap()];
    g.bench_function("product/14", |b| {
        b.iter(|| product_mixing(&set, &set, &set, symh_core::Group::Alternating).unwrap())
    });
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("dims/30", |b| b.iter(|| verify(Theorem::Dims, 30).unwrap()));
    g.bench_function("main-norm/20", |b| b.iter(|| verify(Theorem::MainNorm, 20).unwrap()));
    g.finish();
}

criterion_group!(benches, characters, norms, mixing, sweeps);
criterion_main!(benches);
