//! Hot-kernel benchmarks: Hebbian storage, recall, the three monitor
//! modes and a complete small trial.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use hopcap_core::harness::{run_trial, TrialConfig};
use hopcap_core::{ChainStatistics, CrosstalkMonitor, Network, PatternSet, WeightingMode};

fn patterns(n: usize, count: usize, seed: u64) -> Vec<Vec<i8>> {
    let stats = ChainStatistics::from_params(0.5, 0.0).unwrap();
    PatternSet::generate(n, count, stats, seed)
        .unwrap()
        .patterns()
        .to_vec()
}

fn bench_generate(c: &mut Criterion) {
    let stats = ChainStatistics::from_params(0.6, 0.3).unwrap();
    c.bench_function("generate_50_patterns_n500", |b| {
        b.iter(|| PatternSet::generate(500, 50, black_box(stats), 1).unwrap())
    });
}

fn bench_store(c: &mut Criterion) {
    let set = patterns(500, 64, 1);
    c.bench_function("store_64_patterns_n500", |b| {
        b.iter(|| {
            let mut net = Network::new(500).unwrap();
            for p in &set {
                net.store(black_box(p)).unwrap();
            }
            net
        })
    });
}

fn bench_recall(c: &mut Criterion) {
    let set = patterns(500, 40, 2);
    let mut net = Network::new(500).unwrap();
    for p in &set {
        net.store(p).unwrap();
    }
    c.bench_function("activation_n500", |b| {
        b.iter(|| net.weights().activation(black_box(&set[0])).unwrap())
    });
    c.bench_function("one_step_recall_n500", |b| {
        b.iter(|| net.recall_one_step(black_box(&set[0])).unwrap())
    });
}

fn bench_monitor(c: &mut Criterion) {
    let n = 200;
    let set = patterns(n, 24, 3);
    let stats = ChainStatistics::from_params(0.5, 0.0).unwrap();
    let mut group = c.benchmark_group("monitor_24_stores_n200");
    for mode in [
        WeightingMode::Expectation,
        WeightingMode::Raw,
        WeightingMode::Exact,
    ] {
        group.bench_function(mode.to_string(), |b| {
            b.iter(|| {
                let mut net = Network::new(n).unwrap();
                let mut monitor = CrosstalkMonitor::new(n, stats, mode).unwrap();
                for p in &set {
                    net.store(p).unwrap();
                    monitor.record_store(&net, p).unwrap();
                }
                monitor.current_worst()
            })
        });
    }
    group.finish();
}

fn bench_trial(c: &mut Criterion) {
    let cfg = TrialConfig {
        n: 200,
        seed: 5,
        ..TrialConfig::default()
    };
    c.bench_function("full_trial_n200", |b| {
        b.iter(|| run_trial(black_box(&cfg), 0).unwrap())
    });
}

criterion_group!(
    kernels,
    bench_generate,
    bench_store,
    bench_recall,
    bench_monitor,
    bench_trial
);
criterion_main!(kernels);
