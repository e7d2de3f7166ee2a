use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sneakpath_core::{
    across_array_rate, cq, optimize_q, single_array_rate, tin_rate, tin_sp_probability,
    OptimizeOptions, QuadOptions, ResistiveParams, SfDistribution, TinMode,
};

fn rates(c: &mut Criterion) {
    let quad = QuadOptions::default();
    let params = ResistiveParams::reference(100.0).unwrap();
    let dist = SfDistribution::truncated_binomial(65536, 1e-4, 8).unwrap();

    c.bench_function("cq", |b| {
        b.iter(|| cq(black_box(0.3), black_box(2.0), &quad).unwrap())
    });
    c.bench_function("across_rate", |b| {
        b.iter(|| across_array_rate(black_box(0.3), &params, &dist, &quad).unwrap())
    });
    c.bench_function("tin_across_rate", |b| {
        b.iter(|| {
            let a = tin_sp_probability(0.3, TinMode::Across(&dist));
            tin_rate(black_box(0.3), &params, a, &quad).unwrap()
        })
    });
    c.bench_function("optimize_single", |b| {
        b.iter(|| {
            optimize_q(
                |q| single_array_rate(q, &params, 8, &quad),
                &OptimizeOptions::default(),
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, rates);
criterion_main!(benches);
