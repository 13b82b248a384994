//! Benchmarks for the hot kernels: bit-indexed Pauli expectation versus the
//! dense oracle, reduced-state purity, both parity solvers, the exact
//! context-cover search, and protocol sampling.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use mmes_core::correlations::canonical_table;
use mmes_core::dense::expectation_dense;
use mmes_core::experiment::{outcome_distribution, MeasurementContext};
use mmes_core::hvmodel::{compile, solve_bruteforce, solve_gf2, LocalityModel, OutcomeAssignment};
use mmes_core::qstate::{PauliAxis, PauliString, StateVector};
use mmes_core::rng::SplitMix64;
use mmes_core::{build_mmes5, minimum_context_cover, run_protocol};

const AXES: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

fn random_state(num_qubits: usize, rng: &mut SplitMix64) -> StateVector {
    let amplitudes: Vec<Complex64> = (0..(1usize << num_qubits))
        .map(|_| Complex64::new(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0))
        .collect();
    StateVector::new(num_qubits, amplitudes).expect("random states are valid")
}

fn random_string(num_qubits: usize, rng: &mut SplitMix64) -> PauliString {
    PauliString::new(
        (0..num_qubits)
            .map(|_| AXES[rng.next_below(4) as usize])
            .collect(),
    )
}

fn bench_expectation(c: &mut Criterion) {
    let mut group = c.benchmark_group("expectation");
    let state5 = build_mmes5();
    let row: PauliString = "XXZXZ".parse().unwrap();
    group.bench_function("kernel_n5", |b| {
        b.iter(|| black_box(&state5).expectation(black_box(&row)).unwrap())
    });
    group.bench_function("dense_n5", |b| {
        b.iter(|| expectation_dense(black_box(&state5), black_box(&row)).unwrap())
    });

    let mut rng = SplitMix64::new(5);
    let state12 = random_state(12, &mut rng);
    let string12 = random_string(12, &mut rng);
    group.bench_function("kernel_n12", |b| {
        b.iter(|| black_box(&state12).expectation(black_box(&string12)).unwrap())
    });

    let state8 = random_state(8, &mut rng);
    let string8 = random_string(8, &mut rng);
    group.bench_function("dense_n8", |b| {
        b.iter(|| expectation_dense(black_box(&state8), black_box(&string8)).unwrap())
    });
    group.finish();
}

fn bench_purity(c: &mut Criterion) {
    let mut rng = SplitMix64::new(6);
    let state12 = random_state(12, &mut rng);
    let kept: Vec<usize> = (0..6).collect();
    c.bench_function("purity_n12_keep6", |b| {
        b.iter(|| black_box(&state12).subsystem_purity(black_box(&kept)).unwrap())
    });
}

fn bench_solvers(c: &mut Criterion) {
    let table = canonical_table();
    let local = compile(&table, LocalityModel::Local, None).unwrap();
    let assignment =
        OutcomeAssignment::enumerate_for(&[PauliAxis::X, PauliAxis::Y, PauliAxis::Z])
            .into_iter()
            .next()
            .unwrap();
    let block = compile(
        &table,
        LocalityModel::BlockNonlocal { isolated_party: 4 },
        Some(&assignment),
    )
    .unwrap();

    let mut group = c.benchmark_group("solvers");
    group.bench_function("gf2_block_12vars", |b| {
        b.iter(|| solve_gf2(black_box(&block)))
    });
    group.bench_function("gf2_local_15vars", |b| {
        b.iter(|| solve_gf2(black_box(&local)))
    });
    group.bench_function("bruteforce_block_12vars", |b| {
        b.iter(|| solve_bruteforce(black_box(&block)).unwrap())
    });
    group.bench_function("bruteforce_local_15vars", |b| {
        b.iter(|| solve_bruteforce(black_box(&local)).unwrap())
    });
    group.finish();
}

fn bench_context_cover(c: &mut Criterion) {
    let table = canonical_table();
    c.bench_function("minimum_context_cover", |b| {
        b.iter(|| minimum_context_cover(black_box(&table)))
    });
}

fn bench_protocol(c: &mut Criterion) {
    let state = build_mmes5();
    let table = canonical_table();
    let context = MeasurementContext::parse("XYZXY").unwrap();
    let mut group = c.benchmark_group("protocol");
    group.bench_function("outcome_distribution", |b| {
        b.iter(|| outcome_distribution(black_box(&state), black_box(&context)).unwrap())
    });
    group.sample_size(20);
    group.bench_function("run_protocol_1000", |b| {
        b.iter(|| run_protocol(black_box(&state), black_box(&table), 1000, 42).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_expectation,
    bench_purity,
    bench_solvers,
    bench_context_cover,
    bench_protocol
);
criterion_main!(benches);
