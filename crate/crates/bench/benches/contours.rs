use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pim_bench::{running_focal, running_model, sparse_config};
use pim_core::combiners::tnorm_combine;
use pim_core::sparse::{sparse_normalizer, sparse_tnorm_contour};
use pim_core::validify::{CombinerGenerator, ValidifyConfig, Validifier};
use pim_core::{upper_prob, Assertion, CombinerSpec, SamplingModel, TNorm};

fn combiners(c: &mut Criterion) {
    let (m, focal) = (running_model(), running_focal());
    let vacuous = m.vacuous_contour(0.9);
    let q = focal.contour();
    c.bench_function("tnorm_combine", |b| {
        b.iter(|| tnorm_combine(black_box(&vacuous), black_box(&q), TNorm::Product).unwrap())
    });
    let tn = tnorm_combine(&vacuous, &q, TNorm::Product).unwrap();
    let a = Assertion::open(1.2, 3.0);
    c.bench_function("upper_prob_exact", |b| b.iter(|| upper_prob(black_box(&tn), black_box(&a)).unwrap()));
    c.bench_function("dempster_contour", |b| {
        b.iter(|| CombinerSpec::Dempster.contour(&m, &focal, black_box(0.9)).unwrap())
    });
}

fn validifier(c: &mut Criterion) {
    let (m, focal) = (running_model(), running_focal());
    let g = CombinerGenerator {
        spec: CombinerSpec::TNorm(TNorm::Product),
        model: m,
        prior: focal.clone(),
    };
    let cfg = ValidifyConfig {
        mc_reps: 1_000,
        seed: 1,
        ..ValidifyConfig::default()
    };
    let v = Validifier::new(&g, &focal, &SamplingModel::Scalar(m), &cfg).unwrap();
    c.bench_function("validifier_transform", |b| b.iter(|| v.transform(black_box(0.37))));
    let mut group = c.benchmark_group("validifier_build");
    group.sample_size(10);
    group.bench_function("mc_reps_1000", |b| {
        b.iter(|| Validifier::new(&g, &focal, &SamplingModel::Scalar(m), &cfg).unwrap())
    });
    group.finish();
}

fn sparse(c: &mut Criterion) {
    let cfg = sparse_config(1_000);
    let prior = cfg.prior().unwrap();
    c.bench_function("sparse_normalizer", |b| {
        b.iter(|| sparse_normalizer(black_box(&cfg.y), &prior).unwrap())
    });
    let tn = sparse_tnorm_contour(&cfg).unwrap();
    c.bench_function("sparse_tnorm_eval", |b| b.iter(|| tn.eval(black_box(&[0.4, 0.1]))));
}

criterion_group!(benches, combiners, validifier, sparse);
criterion_main!(benches);
