//! Throughput of the exact kernels that dominate a mass run.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use spheremass_core::exactnum::ln2_enclosure;
use spheremass_core::integrals::{integrate_unit_square, moment_via_triangles};
use spheremass_core::mass::{error_bound, partial_sum, Manifold};
use spheremass_core::xyfunc::{conformal_laplacian, source_term};

fn bench_ln2(c: &mut Criterion) {
    c.bench_function("ln2_enclosure_80_digits", |b| {
        b.iter(|| ln2_enclosure(black_box(80)))
    });
}

fn bench_moments(c: &mut Criterion) {
    // The triangle-assembly route exercises the full recursion; the
    // memoized closed form is not representative, so bypass the cache.
    c.bench_function("moment_via_triangles_8_8", |b| {
        b.iter(|| moment_via_triangles(black_box(8), black_box(8)))
    });
}

fn bench_box_operator(c: &mut Criterion) {
    let f = source_term();
    c.bench_function("conformal_laplacian_of_source", |b| {
        b.iter(|| conformal_laplacian(black_box(&f)))
    });
    let boxed = conformal_laplacian(&f);
    let squared = boxed.mul(&boxed);
    c.bench_function("integrate_square_boxed_source_sq", |b| {
        b.iter(|| integrate_unit_square(black_box(&squared)).unwrap())
    });
}

fn bench_partial_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("partial_sum");
    group.sample_size(10);
    // Memo tables make repeated runs cheap; the first iteration does
    // the real work, so this measures the warm path deliberately.
    group.bench_function("s2xs2_n10_warm", |b| {
        b.iter(|| partial_sum(black_box(Manifold::S2xS2), black_box(10)))
    });
    group.finish();
}

fn bench_error_bound(c: &mut Criterion) {
    c.bench_function("error_bound_rp2rp2_n100", |b| {
        b.iter(|| error_bound(black_box(Manifold::Rp2xRp2), black_box(100)))
    });
}

criterion_group!(
    benches,
    bench_ln2,
    bench_moments,
    bench_box_operator,
    bench_partial_sum,
    bench_error_bound
);
criterion_main!(benches);
