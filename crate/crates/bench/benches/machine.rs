use criterion::{black_box, criterion_group, criterion_main, Criterion};
use workbench_bench::{doubling_loop, n};
use workbench_core::machine::{evaluate_index, min_trace_code};
use workbench_core::smn;

fn eval(c: &mut Criterion) {
    let e = doubling_loop();
    c.bench_function("eval doubling 1000", |b| {
        b.iter(|| evaluate_index(black_box(&e), &[n(1000)], 1_000_000))
    });
    c.bench_function("trace code doubling 20", |b| {
        b.iter(|| min_trace_code(black_box(&e), &[n(20)], 10_000))
    });
    c.bench_function("smn doubling", |b| b.iter(|| smn(black_box(&e), &[n(7)])));
}

criterion_group!(benches, eval);
criterion_main!(benches);
