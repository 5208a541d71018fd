use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kmult::batch::{evaluate_corpus, map, map_sequential};
use kmult::gen::{gen_random, gen_uca};
use kmult::{construct, decide};

fn corpus(size: usize) -> Vec<kmult::PcaModel> {
    (0..size as u64)
        .filter_map(|seed| gen_random(4 + (seed % 8) as usize, true, seed).ok())
        .filter(|m| m.is_connected())
        .collect()
}

fn bench_corpus(c: &mut Criterion) {
    let models = corpus(64);
    let mut group = c.benchmark_group("corpus");
    group.bench_function("sequential", |b| b.iter(|| evaluate_corpus(&models, false)));
    group.bench_function("parallel", |b| b.iter(|| evaluate_corpus(&models, true)));
    group.finish();
}

fn bench_large(c: &mut Criterion) {
    let models: Vec<_> = (0..8).map(|s| gen_uca(20_000, s)).collect();
    let run = |m: &kmult::PcaModel| {
        decide(m, 1).unwrap();
        construct(m, 1).unwrap().c
    };
    let mut group = c.benchmark_group("decide_construct_batch");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| map_sequential(&models, run)));
    group.bench_function("parallel", |b| b.iter(|| map(&models, run)));
    group.finish();
}

fn bench_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide_construct");
    group.sample_size(10);
    for n in [10_000usize, 20_000, 40_000] {
        let m = gen_uca(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| construct(m, 1).unwrap().c)
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default();
    targets = bench_corpus, bench_large, bench_scaling
}
criterion_main!(benches);
