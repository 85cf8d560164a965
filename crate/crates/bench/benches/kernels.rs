use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use circnet::circ::enumerate_pairs;
use circnet::linalg::{circular_minor, determinant};
use circnet::mutation::{enumerate_plucker_clusters, MoveKind};
use circnet::network::{connections, random_network, response_matrix, well_connected};
use circnet::positroid::check_axioms;
use circnet::rewrite::Rewriter;
use circnet::sample::{random_matrix, rng_from_seed};
use circnet::wsep::maximal_ws_collections;

fn linear_algebra(c: &mut Criterion) {
    let mut rng = rng_from_seed(1);
    let m = random_matrix(8, 8, &mut rng);
    c.bench_function("determinant 8x8", |b| b.iter(|| determinant(black_box(&m)).unwrap()));
    let g = well_connected(8).with_random_conductances(&mut rng);
    c.bench_function("response matrix n=8", |b| b.iter(|| response_matrix(black_box(&g)).unwrap()));
    let r = response_matrix(&g).unwrap().into_matrix();
    let pairs = enumerate_pairs(8, None);
    c.bench_function("all circular minors n=8", |b| {
        b.iter(|| pairs.iter().map(|x| circular_minor(&r, x).unwrap()).collect::<Vec<_>>())
    });
}

fn combinatorics(c: &mut Criterion) {
    let mut rng = rng_from_seed(2);
    let g = random_network(5, 3, &mut rng);
    c.bench_function("connections n=5", |b| b.iter(|| connections(black_box(&g))));
    let pi = connections(&g);
    c.bench_function("axioms n=5", |b| b.iter(|| check_axioms(black_box(&pi)).is_ok()));
    c.bench_function("rewrite all pairs n=7", |b| {
        let pairs = enumerate_pairs(7, None);
        b.iter(|| {
            let mut r = Rewriter::new(7);
            pairs.iter().map(|x| r.express(x).unwrap()).count()
        })
    });
}

fn clusters(c: &mut Criterion) {
    let mut group = c.benchmark_group("clusters");
    group.sample_size(10);
    group.bench_function("plucker clusters n=5", |b| {
        b.iter(|| enumerate_plucker_clusters(5, &[MoveKind::P1, MoveKind::P2]).unwrap().len())
    });
    group.bench_function("maximal ws collections n=5", |b| b.iter(|| maximal_ws_collections(5).unwrap().len()));
    group.finish();
}

criterion_group!(benches, linear_algebra, combinatorics, clusters);
criterion_main!(benches);
