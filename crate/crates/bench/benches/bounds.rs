use std::hint::black_box;

use codebound::classical::best_classical;
use codebound::hamming::{radius, random_tuple};
use codebound::lp::delsarte_bound;
use codebound::poly::hahn_family;
use codebound::sdp::{build_sdp, solve};
use codebound::{max_code_exact, PseudoDistanceKind, SolverParams};
use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pseudo_distances(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tuples: Vec<_> = (0..64).map(|_| random_tuple(&mut rng, 16, 3)).collect();
    c.bench_function("radius of 64 triples, n=16", |b| {
        b.iter(|| tuples.iter().map(|t| radius(black_box(t)).unwrap()).sum::<u32>())
    });
}

fn classical(c: &mut Criterion) {
    c.bench_function("best classical n=20 m=10", |b| {
        b.iter(|| best_classical(black_box(20), 3, 10, PseudoDistanceKind::GeneralizedD).unwrap())
    });
}

fn hahn(c: &mut Criterion) {
    c.bench_function("hahn family (16, 8, 12)", |b| b.iter(|| hahn_family(black_box(16), 8, 12).unwrap()));
}

fn sdp(c: &mut Criterion) {
    let mut g = c.benchmark_group("sdp");
    g.sample_size(10);
    g.bench_function("build n=13 d m=6", |b| {
        b.iter(|| build_sdp(black_box(13), PseudoDistanceKind::GeneralizedD, 6, false).unwrap())
    });
    let p = build_sdp(12, PseudoDistanceKind::GeneralizedD, 5, false).unwrap();
    g.bench_function("solve n=12 d m=5", |b| b.iter(|| solve(black_box(&p), &SolverParams::default()).unwrap()));
    g.finish();
}

fn lp(c: &mut Criterion) {
    c.bench_function("delsarte lp n=16 d=6", |b| b.iter(|| delsarte_bound(black_box(16), 6).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("exact n=6 d1 m=3", |b| {
        b.iter(|| max_code_exact(black_box(6), PseudoDistanceKind::ClassicalD1, 3, false).unwrap())
    });
    g.finish();
}

criterion_group!(benches, pseudo_distances, classical, hahn, sdp, lp, oracle);
criterion_main!(benches);
