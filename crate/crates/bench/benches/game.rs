use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rendezvous_bench::rendezvous_games;
use rendezvous_core::{
    born_table, full_table, lhv_bound, optimize_classical, run, AngleAssignment, BellExpression, MeasurementSetting,
    RunOptions, SphereModel, StrategySpec, TwoQubitState,
};
use std::hint::black_box;

fn bench_optimize(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize_classical");
    group.sample_size(10);
    for cfg in rendezvous_games(&[3, 6, 9, 10]).unwrap() {
        group.bench_with_input(BenchmarkId::from_parameter(cfg.m()), &cfg, |b, cfg| {
            b.iter(|| optimize_classical(black_box(cfg)).unwrap())
        });
    }
    group.finish();
}

fn bench_lhv_bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("lhv_bound");
    for m in [3, 8, 12] {
        let expr = BellExpression::rendezvous(m).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &expr, |b, e| {
            b.iter(|| lhv_bound(black_box(e)).unwrap())
        });
    }
    group.finish();
}

fn bench_born(c: &mut Criterion) {
    let state = TwoQubitState::phi_plus();
    let (a, b) = (MeasurementSetting::new(0.0), MeasurementSetting::new(120.0));
    c.bench_function("born_table", |bench| bench.iter(|| born_table(black_box(&state), a, b)));
    let standard = AngleAssignment::standard();
    c.bench_function("full_table standard", |bench| {
        bench.iter(|| full_table(black_box(&state), &standard, &standard).unwrap())
    });
}

fn bench_simulation(c: &mut Criterion) {
    let cfg = rendezvous_games(&[3]).unwrap().remove(0);
    let model = SphereModel::from_config(&cfg);
    let strategy = StrategySpec::standard_quantum();
    let mut group = c.benchmark_group("simulate 100k");
    group.sample_size(10);
    for shards in [1, 4] {
        let opts = RunOptions {
            shards,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::new("shards", shards), &opts, |b, opts| {
            b.iter(|| run(&cfg, &model, &strategy, 100_000, 42, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_optimize, bench_lhv_bound, bench_born, bench_simulation);
criterion_main!(benches);
