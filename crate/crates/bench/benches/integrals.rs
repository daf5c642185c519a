use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hullaw_core::asymptotics::{j_direct, j_transformed, ExponentVector};

fn box_integral_routes(c: &mut Criterion) {
    let interior = ExponentVector::new(vec![1.0, 1.0, 1.0], 0.1).unwrap();
    c.bench_function("j_direct_gauss_jacobi_48", |b| {
        b.iter(|| j_direct(black_box(&interior), 1_000, 48).unwrap().value)
    });
    c.bench_function("j_transformed_interior_100k", |b| {
        b.iter(|| j_transformed(black_box(&interior), 10_000, 100_000, 3).unwrap().value)
    });
    let extremal = ExponentVector::new(vec![1.0, 1.0, 0.0], 1.0 / 6.0).unwrap();
    c.bench_function("j_transformed_ordered_100k", |b| {
        b.iter(|| j_transformed(black_box(&extremal), 10_000, 100_000, 3).unwrap().value)
    });
}

criterion_group!(benches, box_integral_routes);
criterion_main!(benches);
