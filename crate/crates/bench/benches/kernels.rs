use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rotaset::entropy::{greedy_count, OrbitTable};
use rotaset::{convex_hull, estimate_rotation_set, iterate, Grid, PlanarVec};
use rotaset_bench::{builtin_maps, cloud};

fn eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("iterate_1000");
    let start = PlanarVec::new(0.1, 0.2);
    for (name, lift) in builtin_maps() {
        group.bench_function(name, |b| b.iter(|| iterate(&lift, black_box(start), 1000).unwrap()));
    }
    group.finish();
}

fn hull(c: &mut Criterion) {
    let mut group = c.benchmark_group("convex_hull");
    for n in [1_000, 16_384, 100_000] {
        let points = cloud(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &points, |b, p| {
            b.iter(|| convex_hull(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn rotation_estimate(c: &mut Criterion) {
    let mut group = c.benchmark_group("rotation_estimate_grid32");
    group.sample_size(10);
    for (name, lift) in builtin_maps() {
        group.bench_function(name, |b| {
            b.iter(|| estimate_rotation_set(&lift, Grid::square(32), &[100, 500]).unwrap())
        });
    }
    group.finish();
}

fn spanning_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_count_eps0.05_n8");
    group.sample_size(10);
    for (name, lift) in builtin_maps() {
        let table = OrbitTable::build(&lift, 128, 8).unwrap();
        group.bench_function(name, |b| b.iter(|| greedy_count(&table, 0.05, 8).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, eval, hull, rotation_estimate, spanning_count);
criterion_main!(benches);
