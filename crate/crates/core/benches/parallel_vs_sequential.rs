use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gpd_core::commands::cmd_table1_with;
use gpd_core::commands::Table1Tolerances;
use gpd_core::empirical::empirical_ccdf;
use gpd_core::fitting::fit_with;
use gpd_core::inequality::{lorenz_curve_with, propagate_uncertainty_with};
use gpd_core::sampling::sample_with;
use gpd_core::{
    build_first_moment_grid, Execution, FitConfig, GpdParams, ParamSigmas, QuadratureConfig,
    SampleSpec, Target,
};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn params() -> GpdParams {
    GpdParams::new(0.342, 7.533, 2.839).unwrap()
}

fn bench_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_1e6");
    group.sample_size(10);
    let spec = SampleSpec::new(1_000_000, 42).unwrap();
    let p = params();
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_with(black_box(&spec), &p, mode).unwrap())
        });
    }
    group.finish();
}

fn bench_table1(c: &mut Criterion) {
    let mut group = c.benchmark_group("table1_recompute");
    group.sample_size(10);
    let cfg = QuadratureConfig::default();
    let tol = Table1Tolerances::default();
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| cmd_table1_with(&tol, &cfg, true, mode).unwrap())
        });
    }
    group.finish();
}

fn bench_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_1e6");
    group.sample_size(10);
    let dist = sample_with(&SampleSpec::new(1_000_000, 7).unwrap(), &params(), Execution::default())
        .unwrap();
    let ccdf = empirical_ccdf(&dist);
    let cfg = FitConfig::default();
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fit_with(black_box(&ccdf), &cfg, mode).unwrap())
        });
    }
    group.finish();
}

fn bench_lorenz(c: &mut Criterion) {
    let mut group = c.benchmark_group("lorenz_1e5");
    let p = params();
    let grid = build_first_moment_grid(&p, 256, &QuadratureConfig::default()).unwrap();
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| lorenz_curve_with(&p, 100_000, &grid, mode).unwrap())
        });
    }
    group.finish();
}

fn bench_propagation(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagate_gini");
    let p = params();
    let cfg = QuadratureConfig::default();
    let s = ParamSigmas::new(0.016, 0.05, 0.109).with_a_uncertainty(0.0215);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| propagate_uncertainty_with(&p, &s, Target::Gini, &cfg, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_sampling,
    bench_table1,
    bench_fit,
    bench_lorenz,
    bench_propagation
);
criterion_main!(benches);
