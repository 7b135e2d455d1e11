//! Sequential vs parallel kernel paths, plus a trajectory batch, on sizes
//! where the split matters. Run with `cargo bench -p qflow`; build with
//! `--no-default-features` to measure the sequential-only configuration.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use qflow::circuit::Circuit;
use qflow::momentum::{build_full_step, exact_momentum_phases, TruncationPolicy};
use qflow::noise::{noisy_execute, NoiseModel};
use qflow::qft::AqftConfig;
use qflow::state::{kernels, Statevector};

fn test_amps(n: usize) -> Vec<Complex64> {
    (0..(1usize << n))
        .map(|m| Complex64::new((m as f64 * 0.37).sin(), (m as f64 * 0.11).cos()))
        .collect()
}

fn bench_hadamard(c: &mut Criterion) {
    let mut group = c.benchmark_group("hadamard");
    for n in [14usize, 18, 20] {
        let amps = test_amps(n);
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |b, _| {
            let mut work = amps.clone();
            b.iter(|| kernels::hadamard_seq(&mut work, n / 2));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", n), &n, |b, _| {
            let mut work = amps.clone();
            b.iter(|| kernels::hadamard_par(&mut work, n / 2));
        });
    }
    group.finish();
}

fn bench_diagonal(c: &mut Criterion) {
    let mut group = c.benchmark_group("momentum_diagonal");
    for n in [14usize, 18, 20] {
        let amps = test_amps(n);
        let phase = exact_momentum_phases(n, 0.5);
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |b, _| {
            let mut work = amps.clone();
            b.iter(|| kernels::diagonal_phases_seq(&mut work, &phase));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", n), &n, |b, _| {
            let mut work = amps.clone();
            b.iter(|| kernels::diagonal_phases_par(&mut work, &phase));
        });
    }
    group.finish();
}

fn bench_zz(c: &mut Criterion) {
    let mut group = c.benchmark_group("zz_entangler");
    for n in [14usize, 18, 20] {
        let amps = test_amps(n);
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |b, _| {
            let mut work = amps.clone();
            b.iter(|| kernels::zz_entangler_seq(&mut work, 0, n - 1, 0.3));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", n), &n, |b, _| {
            let mut work = amps.clone();
            b.iter(|| kernels::zz_entangler_par(&mut work, 0, n - 1, 0.3));
        });
    }
    group.finish();
}

fn bench_trajectories(c: &mut Criterion) {
    let circuit: Circuit = build_full_step(
        5,
        5,
        std::f64::consts::PI / 2.0,
        &AqftConfig::new(2, true),
        &TruncationPolicy::new(std::f64::consts::PI / 8.0, true),
    )
    .unwrap();
    let initial = Statevector::zero(10).unwrap();
    let model = NoiseModel::default();
    // the trajectory fan-out is parallel whenever the feature is on
    c.bench_function("noisy_trajectories_64", |b| {
        b.iter(|| noisy_execute(&circuit, &initial, &model, 64).unwrap());
    });
}

criterion_group!(
    benches,
    bench_hadamard,
    bench_diagonal,
    bench_zz,
    bench_trajectories
);
criterion_main!(benches);
