use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use puremin::harness::suites::run_suite;
use puremin::harness::{Gen, GenProfile, Style};
use puremin::{diagnose, module_dimension, reduce, snf, DimensionKind, RingSpec};

fn rings() -> Vec<RingSpec> {
    vec![RingSpec::Int, RingSpec::int_mod(12).unwrap(), RingSpec::invert(&[5]).unwrap(), RingSpec::local_at(3).unwrap()]
}

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    for r in rings() {
        for n in [4usize, 8] {
            let mut g = Gen::new(&r, 9, 7);
            let m = g.matrix(n, n);
            group.bench_function(format!("{n}x{n} over {r}"), |b| b.iter(|| snf(black_box(&m))));
        }
    }
    group.finish();
}

fn bench_reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for r in rings() {
        let p = GenProfile::new(&r, Style::DiskSphereSumScrambled, 11).sized(5, 4).free();
        let cx = Gen::from_profile(&p).complex(&p).complex;
        group.bench_function(format!("over {r}"), |b| b.iter(|| reduce(black_box(&cx)).unwrap()));
    }
    group.finish();
}

fn bench_diagnose(c: &mut Criterion) {
    let r = RingSpec::int_mod(4).unwrap();
    let p = GenProfile::new(&r, Style::ConeOfRandomMap, 5).sized(4, 3).free();
    let cx = Gen::from_profile(&p).complex(&p).complex;
    c.bench_function("diagnose Z/4", |b| b.iter(|| diagnose(black_box(&cx))));
}

fn bench_dimension(c: &mut Criterion) {
    let r = RingSpec::Int;
    let mut g = Gen::new(&r, 9, 3);
    let mods: Vec<_> = (0..16).map(|_| g.module(3)).collect();
    c.bench_function("pd of 16 modules over Z", |b| {
        b.iter(|| mods.iter().map(|m| module_dimension(m, DimensionKind::Projective, 8).unwrap()).collect::<Vec<_>>())
    });
}

fn bench_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for name in ["vnr", "bg", "two_of_three", "appendix_tensor"] {
        group.bench_function(name, |b| b.iter(|| run_suite(name, None, 1, Some(40)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_snf, bench_reduce, bench_diagnose, bench_dimension, bench_suites);
criterion_main!(benches);
