use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use reflex_bench::corpus;
use reflex_core::classify::{classify_polygons, enumerate_weight_systems};
use reflex_core::ehrhart::delta_vector;
use reflex_core::jacobian::{generic_regular, Support};
use reflex_core::lattice::RankMode;
use reflex_core::periods::pi0;
use reflex_core::polytope::standard;
use reflex_core::reflexive::hodge_report;

fn polytopes(c: &mut Criterion) {
    let mut group = c.benchmark_group("polytope");
    for (name, p) in corpus() {
        group.bench_function(format!("delta/{name}"), |b| {
            b.iter(|| {
                // a fresh copy so cached lattice points are recomputed
                let q = p.translate(&reflex_core::LatticeVector::zero(p.dim())).unwrap();
                delta_vector(black_box(&q)).unwrap()
            })
        });
        group.bench_function(format!("dual/{name}"), |b| b.iter(|| black_box(&p).dual().unwrap()));
    }
    group.sample_size(10);
    let quintic = standard::fermat(4);
    group.bench_function("hodge/fermat4", |b| b.iter(|| hodge_report(black_box(&quintic)).unwrap()));
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    group.bench_function("polygons", |b| b.iter(|| classify_polygons().unwrap()));
    group.bench_function("weights/4", |b| b.iter(|| enumerate_weight_systems(black_box(4)).unwrap()));
    group.finish();
}

fn rings_and_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    group.sample_size(10);
    let mirror = standard::simplex(4);
    group.bench_function("pi0/simplex4/k60", |b| b.iter(|| pi0(black_box(&mirror), 60).unwrap()));
    let quartic = standard::fermat(3);
    group.bench_function("jacobian/fermat3/modular", |b| {
        b.iter(|| generic_regular(&quartic, Support::VertexLattice, 0, RankMode::modular(0).into(), 4).unwrap())
    });
    group.finish();
}

criterion_group!(benches, polytopes, classification, rings_and_series);
criterion_main!(benches);
