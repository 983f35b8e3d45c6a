use criterion::{black_box, criterion_group, criterion_main, Criterion};
use workbench_bench::n;
use workbench_core::{canonical_notation, fgh_eval, CnfOrdinal};

fn ordinals(c: &mut Criterion) {
    let a: CnfOrdinal = "w^3*2 + w^2*5 + w + 4".parse().unwrap();
    c.bench_function("canonical notation", |b| {
        b.iter(|| canonical_notation(black_box(&a)).unwrap())
    });
    let w2: CnfOrdinal = "w^2".parse().unwrap();
    c.bench_function("fgh w^2 at 1", |b| {
        b.iter(|| fgh_eval(black_box(&w2), &n(1), 1_000_000))
    });
    c.bench_function("fgh 2 at 20", |b| {
        b.iter(|| fgh_eval(&CnfOrdinal::nat(2), black_box(&n(20)), 1_000_000))
    });
}

criterion_group!(benches, ordinals);
criterion_main!(benches);
