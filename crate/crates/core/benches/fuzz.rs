use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use knowhow_core::fuzz::{default_principles, run_soundness, Execution, FuzzConfig};

fn soundness(c: &mut Criterion) {
    let principles = default_principles();
    let mut group = c.benchmark_group("soundness");
    group.sample_size(10);
    for models in [50, 200] {
        let cfg = FuzzConfig {
            num_models: models,
            ..FuzzConfig::default()
        };
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, models), &cfg, |b, cfg| {
                b.iter(|| run_soundness(cfg, &principles, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, soundness);
criterion_main!(benches);
