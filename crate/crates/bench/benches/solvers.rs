use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use rbr_bench::{cluster_instance, cw_instance, modular_instance, mpc_instance};
use rbr_core::{solve_cw, solve_dc, solve_mpc, solve_mw, CwOptions, UnionMode};

fn dc_modulator(c: &mut Criterion) {
    let mut group = c.benchmark_group("dc_modulator");
    group.sample_size(10);
    for m in 2..=6 {
        let g = cluster_instance(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &g, |b, g| {
            b.iter(|| solve_dc(black_box(g), 5, 12).unwrap())
        });
    }
    group.finish();
}

fn mw_modular(c: &mut Criterion) {
    let g = modular_instance();
    let mut group = c.benchmark_group("mw");
    group.sample_size(10);
    group.bench_function(format!("modular_n{}", g.n()), |b| b.iter(|| solve_mw(black_box(&g), 10, 20).unwrap()));
    group.finish();
}

fn cw_union_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("cw_union");
    group.sample_size(10);
    for cw in [3, 4, 5] {
        let (g, e) = cw_instance(cw, 40);
        for (name, mode) in [("naive", UnionMode::Naive), ("fast", UnionMode::Fast)] {
            let opts = CwOptions {
                union_mode: mode,
                ..CwOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(name, cw), &(), |b, _| {
                b.iter(|| solve_cw(black_box(&g), &e, 5, 8, &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn mpc_universe(c: &mut Criterion) {
    let mut group = c.benchmark_group("mpc_universe");
    for universe in [8, 12, 16] {
        let inst = mpc_instance(universe, 12, 4);
        group.bench_with_input(BenchmarkId::from_parameter(universe), &inst, |b, inst| {
            b.iter(|| solve_mpc(black_box(inst)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, dc_modulator, mw_modular, cw_union_modes, mpc_universe);
criterion_main!(benches);
