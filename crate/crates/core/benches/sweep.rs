use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use meshpay::experiment::{sweep_with, ScenarioInput, SweepGrid};
use meshpay::par::Execution;
use meshpay::scenario::{generate_synthetic, SyntheticParams};

fn scenarios(count: usize, nodes: usize) -> Vec<ScenarioInput> {
    (0..count)
        .map(|i| ScenarioInput {
            id: format!("bench-{i}"),
            scenario: generate_synthetic(&SyntheticParams::pedestrian(nodes, 1000 + i as u64))
                .expect("synthetic"),
        })
        .collect()
}

fn bench_sweep(c: &mut Criterion) {
    let inputs = scenarios(4, 100);
    let mut grid = SweepGrid::standard(50_000, 7);
    grid.payments_per_epoch = vec![20, 60, 100];
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, mode) in [
        ("parallel", Execution::Parallel),
        ("sequential", Execution::Sequential),
    ] {
        group.bench_with_input(BenchmarkId::new(name, inputs.len()), &mode, |b, &mode| {
            b.iter(|| sweep_with(&grid, &inputs, mode, |_| {}).expect("sweep"))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
