use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use subjparse::nets::train;
use subjparse::pipeline::run_pipeline_train;
use subjparse::{evaluate, ModelKind, TrainConfig, TrainParams, TupleMode};
use subjparse_bench::Workload;

fn generation(c: &mut Criterion) {
    let w = Workload::bundled();
    let lattices: Vec<_> = w.corpus.sentences.iter().map(|s| w.res.lattice(&s.words)).collect();
    c.bench_function("generate_candidates/corpus", |b| {
        b.iter(|| {
            for l in &lattices {
                black_box(w.res.candidates(l).unwrap());
            }
        })
    });
}

fn encoding(c: &mut Criterion) {
    let w = Workload::bundled();
    let prepared = w.prepared(TupleMode::Both);
    let strings: Vec<_> = prepared
        .cases
        .iter()
        .flat_map(|c| c.candidates.iter().map(|s| s.tags.clone()))
        .collect();
    let mut group = c.benchmark_group("phi");
    for mode in [TupleMode::Pairs, TupleMode::Triples, TupleMode::Both] {
        let index = w.res.index(mode);
        group.bench_with_input(BenchmarkId::from_parameter(mode), &index, |b, index| {
            b.iter(|| {
                for s in &strings {
                    black_box(index.phi(s).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn training(c: &mut Criterion) {
    let w = Workload::bundled();
    let prepared = w.prepared(TupleMode::Both);
    let data = prepared.training_set(w.res.index(TupleMode::Both).dim()).unwrap();
    let params = TrainParams::default();
    let mut group = c.benchmark_group("train");
    group.sample_size(10);
    for kind in [ModelKind::Perceptron, ModelKind::Hodyne, ModelKind::Bayes] {
        group.bench_with_input(BenchmarkId::from_parameter(kind), &kind, |b, &kind| {
            b.iter(|| black_box(train(kind, &data, &params, 1.0).unwrap()))
        });
    }
    group.finish();

    let model = train(ModelKind::Hodyne, &data, &params, 1.0).unwrap().model;
    c.bench_function("evaluate/hodyne", |b| {
        b.iter(|| black_box(evaluate(&model, &prepared.cases).unwrap()))
    });

    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("train/hodyne", |b| {
        b.iter(|| black_box(run_pipeline_train(&w.corpus, &w.res, &TrainConfig::default()).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, generation, encoding, training);
criterion_main!(benches);
