use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hahn_core::coefficients::FieldDescriptor;
use hahn_core::exponents::{GroupDescriptor, GroupElement};
use hahn_core::parallel::Exec;
use hahn_core::sample;
use hahn_core::series::Horizon;
use hahn_core::supports::{CheckBudget, FamilyDescriptor};
use hahn_core::theorems::{
    brute_force_closure_probe, refute_truncation_closure_f2, run_suite, ProbeOp, SuiteConfig,
};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn horizon(bound: i64) -> Horizon {
    Horizon::new(GroupElement::from(bound), 10_000).unwrap()
}

fn truncation_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("truncation_f2");
    group.sample_size(10);
    for degree in [5, 6] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, degree), &degree, |b, &n| {
                b.iter(|| refute_truncation_closure_f2(n, &horizon(30), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn closure_probes(c: &mut Criterion) {
    let mut rng = sample::rng(1);
    let families: Vec<FamilyDescriptor> =
        (0..500).map(|_| sample::explicit_family(&mut rng, -3, 3)).collect();
    let budget = CheckBudget::new(horizon(10));
    let mut group = c.benchmark_group("closure_probe_500");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map(families.clone(), |f| {
                    brute_force_closure_probe(
                        GroupDescriptor::Integers,
                        FieldDescriptor::Rationals,
                        &f,
                        ProbeOp::Add,
                        &budget,
                    )
                    .unwrap()
                })
            })
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let config = SuiteConfig { exec, ..SuiteConfig::default() };
        group.bench_function(name, |b| b.iter(|| run_suite(black_box(&config)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, truncation_search, closure_probes, suite);
criterion_main!(benches);
