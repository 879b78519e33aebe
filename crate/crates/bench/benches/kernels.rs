//! Timings of the inner kernels: field and point arithmetic, principal
//! divisors, one `X₀` solve, the two eliminations and a lift to a place.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ecdlog_bench::{Fixture, LEVEL};
use ecdlog_core::divisor::divisor_of_function;
use ecdlog_core::model::random_function;
use ecdlog_core::rng;
use ecdlog_core::{descent, elim32, elim43};

fn arithmetic(c: &mut Criterion) {
    let fx = Fixture::new();
    let m = &fx.model;
    let k = m.level_field(LEVEL);
    let mut r = rng::stream(1, "bench/arith");
    let a = k.random_nonzero(&mut r);
    let b = k.random_nonzero(&mut r);
    c.bench_function("field_mul", |bn| bn.iter(|| k.mul(black_box(&a), black_box(&b))));
    c.bench_function("field_inv", |bn| bn.iter(|| k.inv(black_box(&a))));
    let p = m.curve.random_point(&k, &mut r);
    let q = m.curve.random_point(&k, &mut r);
    c.bench_function("point_add", |bn| bn.iter(|| m.curve.add(&k, black_box(&p), black_box(&q))));
    let f = random_function(&m.curve, m.base(), &mut r);
    c.bench_function("divisor_of_function", |bn| bn.iter(|| divisor_of_function(&m.curve, m.base(), black_box(&f))));
}

fn eliminations(c: &mut Criterion) {
    let fx = Fixture::new();
    let m = &fx.model;
    let k = m.level_field(LEVEL);
    let mut r = rng::stream(2, "bench/elim");
    let p = m.curve.random_affine(&k, &mut r);
    c.bench_function("x0_solve", |bn| bn.iter(|| elim32::x0_solve(m, &k, &fx.place3, black_box(&p))));
    let mut group = c.benchmark_group("eliminate");
    group.sample_size(10);
    let mut r32 = rng::stream(3, "bench/32");
    group.bench_function("3_to_2", |bn| {
        bn.iter(|| elim32::try_eliminate32(m, LEVEL, &fx.place3, &mut r32, &fx.policy).expect("splits"))
    });
    let mut r43 = rng::stream(4, "bench/43");
    group.bench_function("4_to_3", |bn| {
        bn.iter(|| elim43::try_eliminate43(m, LEVEL, &fx.place4, &mut r43, &fx.policy).expect("splits"))
    });
    group.finish();
}

fn lift(c: &mut Criterion) {
    let fx = Fixture::new();
    let m = &fx.model;
    let mut r = rng::stream(5, "bench/lift");
    let v = m.field().random_nonzero(&mut r);
    let mut group = c.benchmark_group("lift");
    group.sample_size(10);
    group.bench_function("to_degree_16_place", |bn| {
        bn.iter(|| descent::lift_to_place(m, black_box(&v), 2, &mut r, 1 << 20).expect("lift"))
    });
    group.finish();
}

criterion_group!(benches, arithmetic, eliminations, lift);
criterion_main!(benches);
