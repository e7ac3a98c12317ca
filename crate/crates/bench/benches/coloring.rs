use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use vizing_bench::{near_regular, practical_params};
use vizing_core::{edge_color_with, RunOptions};

fn options() -> RunOptions {
    RunOptions {
        validate: false,
        ..RunOptions::default()
    }
}

fn by_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("near_regular_d16_eps0.5");
    group.sample_size(10);
    for n in [1_000, 10_000, 100_000] {
        let g = near_regular(n, 16, 1);
        let params = practical_params(&g, "0.5");
        group.throughput(Throughput::Elements(g.m() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| edge_color_with(g, &params, 7, options()).unwrap().stats)
        });
    }
    group.finish();
}

fn by_epsilon(c: &mut Criterion) {
    let mut group = c.benchmark_group("near_regular_n10000_d64");
    group.sample_size(10);
    let g = near_regular(10_000, 64, 2);
    group.throughput(Throughput::Elements(g.m() as u64));
    for eps in ["1", "0.5", "0.25", "0.1"] {
        let params = practical_params(&g, eps);
        group.bench_with_input(BenchmarkId::from_parameter(eps), &params, |b, params| {
            b.iter(|| edge_color_with(&g, params, 7, options()).unwrap().stats)
        });
    }
    group.finish();
}

criterion_group!(benches, by_size, by_epsilon);
criterion_main!(benches);
