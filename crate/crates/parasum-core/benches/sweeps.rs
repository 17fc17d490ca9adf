//! Wall-time comparison of the parallel (rayon) and sequential trial
//! engines on representative sweeps, plus the dense kernels they lean on.
//!
//! Run with `cargo bench -p parasum-core`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use parasum_core::suite::{run_suite, run_suite_seq, SuiteConfig};
use parasum_core::{gen, geninv, TolerancePolicy};

fn cfg(trials: u32, max_dim: usize) -> SuiteConfig {
    SuiteConfig {
        seed: 42,
        trials,
        max_dim,
        tol: TolerancePolicy::default(),
    }
}

fn bench_sweep_engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("norm_bound_sweep");
    group.sample_size(10);
    for &trials in &[32u32, 128] {
        group.bench_with_input(BenchmarkId::new("sequential", trials), &trials, |b, &t| {
            b.iter(|| run_suite_seq("thm51", &cfg(t, 12)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rayon", trials), &trials, |b, &t| {
            b.iter(|| run_suite("thm51", &cfg(t, 12)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("module_layer_sweep");
    group.sample_size(10);
    group.bench_function("sequential_64", |b| {
        b.iter(|| run_suite_seq("module-layer", &cfg(64, 16)).unwrap())
    });
    group.bench_function("rayon_64", |b| {
        b.iter(|| run_suite("module-layer", &cfg(64, 16)).unwrap())
    });
    group.finish();
}

fn bench_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("pseudoinverse");
    for &n in &[8usize, 16, 32] {
        let mut rng = gen::trial_rng(1, n as u64);
        let t = gen::matrix_rank(&mut rng, n, n, n / 2);
        let tol = TolerancePolicy::for_dims(n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| geninv::mp_inverse(t, &tol).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep_engines, bench_kernels);
criterion_main!(benches);
