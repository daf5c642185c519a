use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hullaw_core::{convex_hull, make_cube, sample_boundary};

fn hull_from_boundary_samples(c: &mut Criterion) {
    let mut group = c.benchmark_group("hull_boundary_samples");
    for dim in [3usize, 4] {
        let cube = make_cube(dim).unwrap();
        for n in [1_000usize, 10_000] {
            let batch = sample_boundary(&cube, n, 42);
            let coords = batch.coords();
            group.bench_with_input(
                BenchmarkId::new(format!("cube{dim}"), n),
                &coords,
                |b, pts| b.iter(|| convex_hull(black_box(pts)).unwrap().f0),
            );
        }
    }
    group.finish();
}

fn hull_worst_case_sphere_like(c: &mut Criterion) {
    // every input point extreme: vertices of a jittered lattice on a sphere
    let mut pts = Vec::new();
    let m = 40;
    for i in 0..m {
        for j in 0..m {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / m as f64;
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / m as f64;
            pts.push(vec![
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ]);
        }
    }
    c.bench_function("hull_sphere_1600", |b| {
        b.iter(|| convex_hull(black_box(&pts)).unwrap().f0)
    });
}

criterion_group!(benches, hull_from_boundary_samples, hull_worst_case_sphere_like);
criterion_main!(benches);
