use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tarski::dynamics::check_hodge_tarski_with;
use tarski::experiment::{run_experiment, ExperimentConfig};
use tarski::semantics::{kripke_sheaf, KripkeModel};
use tarski::sheaf::{sections_bruteforce_with, Graph, TarskiSheaf};
use tarski::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

/// Kripke sheaf on a 5-cycle with 3 states: 8^5 cochains to scan.
fn cycle_sheaf() -> TarskiSheaf {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let graph = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
    let model = KripkeModel::random(3, 5, 0, 0.9, 0.3, &mut rng).unwrap();
    kripke_sheaf(&graph, &model).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let sheaf = cycle_sheaf();
    let mut group = c.benchmark_group("enumeration");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("sections", name), &exec, |b, &exec| {
            b.iter(|| sections_bruteforce_with(black_box(&sheaf), exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hodge", name), &exec, |b, &exec| {
            b.iter(|| check_hodge_tarski_with(black_box(&sheaf), exec).unwrap())
        });
    }
    group.finish();
}

fn experiment(c: &mut Criterion) {
    let config = ExperimentConfig { nodes: 20, radius: 0.3, states: 6, trials: 8, ..ExperimentConfig::default() };
    let mut group = c.benchmark_group("experiment");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("gossip_trials", name), &exec, |b, &exec| {
            b.iter(|| run_experiment(black_box(&config), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, experiment);
criterion_main!(benches);
