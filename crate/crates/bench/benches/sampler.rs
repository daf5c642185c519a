use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hullaw_core::{make_cube, make_simplex, sample_boundary};

fn boundary_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_boundary");
    for dim in [3usize, 4, 6] {
        let cube = make_cube(dim).unwrap();
        group.bench_with_input(BenchmarkId::new("cube", dim), &cube, |b, p| {
            b.iter(|| sample_boundary(black_box(p), 10_000, 7).points.len())
        });
        let simplex = make_simplex(dim).unwrap();
        group.bench_with_input(BenchmarkId::new("simplex", dim), &simplex, |b, p| {
            b.iter(|| sample_boundary(black_box(p), 10_000, 7).points.len())
        });
    }
    group.finish();
}

criterion_group!(benches, boundary_sampling);
criterion_main!(benches);
