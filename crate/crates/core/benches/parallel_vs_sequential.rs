//! Every data-parallel entry point, run with `Execution::Sequential` and
//! `Execution::Parallel` on the same input.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linthresh::census::{CensusEngine, IntSet};
use linthresh::ehrhart::{lattice_count_with, BoxRange, CountOptions};
use linthresh::lattice::Budget;
use linthresh::linalg::int;
use linthresh::simulate::{run_poisson_experiment, ExperimentConfig, ProbabilitySpec};
use linthresh::structure::{
    balance_check_with, c_exponent_with, nontrivial_partitions_with, symmetry_group_with,
};
use linthresh::{Execution, Family, LinearSystem};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn named(family: Family) -> LinearSystem {
    LinearSystem::named(family).unwrap()
}

fn structure(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure");
    group.sample_size(10);
    let m1 = named(Family::M1);
    let b32 = named(Family::Bhg { h: 3, g: 2 });
    for (label, exec) in MODES {
        group.bench_with_input(
            BenchmarkId::new("c_exponent M1", label),
            &exec,
            |b, &exec| b.iter(|| c_exponent_with(black_box(&m1), exec).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("symmetry_group B_3[2]", label),
            &exec,
            |b, &exec| b.iter(|| symmetry_group_with(black_box(&b32), exec).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("partitions B_3[2]", label),
            &exec,
            |b, &exec| b.iter(|| nontrivial_partitions_with(black_box(&b32), exec).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("balance B_3[2]", label),
            &exec,
            |b, &exec| b.iter(|| balance_check_with(black_box(&b32), exec).unwrap()),
        );
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("counting");
    group.sample_size(10);
    let m2 = named(Family::M2);
    let sidon = CensusEngine::new(&named(Family::Sidon)).unwrap();
    let set = IntSet::new((1..=140).filter(|v| v % 7 != 3).collect());
    for (label, exec) in MODES {
        let options = CountOptions {
            exec,
            ..CountOptions::default()
        };
        group.bench_with_input(
            BenchmarkId::new("lattice_count M2 n=12", label),
            &options,
            |b, options| {
                b.iter(|| {
                    lattice_count_with(black_box(&m2), 12, BoxRange::ZeroToN, options).unwrap()
                })
            },
        );
        group.bench_with_input(
            BenchmarkId::new("census Sidon |A|=120", label),
            &exec,
            |b, &exec| {
                b.iter(|| {
                    sidon
                        .census(black_box(&set), exec, &Budget::default())
                        .unwrap()
                })
            },
        );
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    for (label, exec) in MODES {
        let mut cfg = ExperimentConfig::new(
            named(Family::KAp { k: 3 }),
            20_000,
            ProbabilitySpec::Constant(int(1)),
            500,
            7,
        );
        cfg.exec = exec;
        group.bench_with_input(
            BenchmarkId::new("poisson 3-AP 500 trials", label),
            &cfg,
            |b, cfg| b.iter(|| run_poisson_experiment(black_box(cfg)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, structure, counting, simulation);
criterion_main!(benches);
