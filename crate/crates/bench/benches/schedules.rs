use criterion::{criterion_group, criterion_main, Criterion};
use patrol_bench::bench_instance;
use patrol_core::schedules::{alg1_schedule, alg2_schedule, best_schedule, nested4_schedule};
use patrol_core::simulator::{waiting_times, ReportMode};

fn bench_schedules(c: &mut Criterion) {
    let inst = bench_instance(42, 10);
    c.bench_function("alg1_schedule n=10", |b| {
        b.iter(|| alg1_schedule(&inst).unwrap())
    });
    c.bench_function("alg2_schedule n=10", |b| {
        b.iter(|| alg2_schedule(&inst).unwrap())
    });
    c.bench_function("nested4_schedule n=10", |b| {
        b.iter(|| nested4_schedule(&inst).unwrap())
    });
    c.bench_function("best_schedule n=10", |b| {
        b.iter(|| best_schedule(&inst).unwrap())
    });
}

fn bench_simulation(c: &mut Criterion) {
    let inst = bench_instance(42, 10);
    let built = alg2_schedule(&inst).unwrap();
    c.bench_function("waiting_times alg2 n=10", |b| {
        b.iter(|| waiting_times(&built.pair, &inst, ReportMode::SteadyState))
    });
}

criterion_group!(benches, bench_schedules, bench_simulation);
criterion_main!(benches);
