//! Statistical contracts of the boundary sampler: facet frequencies follow
//! areas, within-facet uniformity, occupancy bound concentration.

use hullaw_core::polytope::{make_cube, make_prism, make_simplex};
use hullaw_core::sampler::{facet_occupancy_check, sample_boundary};
use hullaw_core::stats;

#[test]
fn facet_counts_within_three_sigma_of_binomial() {
    let cube = make_cube(3).unwrap();
    let n = 600_000usize;
    let batch = sample_boundary(&cube, n, 20240);
    let (counts, _) = facet_occupancy_check(&batch, &cube);
    let p = 1.0 / 6.0;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    for (facet, &count) in &counts {
        let dev = (count as f64 - n as f64 * p).abs();
        assert!(
            dev <= 3.0 * sigma,
            "facet {facet}: count {count} deviates {dev:.1} > 3 sigma ({sigma:.1})"
        );
    }
}

#[test]
fn chi_square_goodness_of_fit_on_three_bodies() {
    // fixed seed set; chi-square against area proportions at significance 1e-3
    for (poly, seed) in [
        (make_cube(3).unwrap(), 11u64),
        (make_simplex(3).unwrap(), 12),
        (make_prism(3).unwrap(), 13),
    ] {
        let n = 100_000usize;
        let batch = sample_boundary(&poly, n, seed);
        let (counts, _) = facet_occupancy_check(&batch, &poly);
        let observed: Vec<u64> = (0..poly.facets().len()).map(|f| counts[&f]).collect();
        let proportions: Vec<f64> = poly
            .facets()
            .iter()
            .map(|f| f.area / poly.surface_area())
            .collect();
        let p_value = stats::chi_square_gof_pvalue(&observed, &proportions);
        assert!(
            p_value > 1e-3,
            "facet frequencies reject uniformity: p = {p_value:.2e}"
        );
    }
}

#[test]
fn within_facet_mean_converges_to_centroid() {
    let simplex = make_simplex(3).unwrap();
    let n = 100_000usize;
    let batch = sample_boundary(&simplex, n, 77);
    for (fid, facet) in simplex.facets().iter().enumerate() {
        let mut centroid = vec![0.0; 3];
        for &v in &facet.vertex_ids {
            for k in 0..3 {
                centroid[k] += simplex.vertices()[v][k];
            }
        }
        centroid.iter_mut().for_each(|c| *c /= facet.vertex_ids.len() as f64);

        let members: Vec<&hullaw_core::BoundaryPoint> =
            batch.points.iter().filter(|p| p.facet_id == fid).collect();
        assert!(members.len() > 1000);
        for k in 0..3 {
            let coords: Vec<f64> = members.iter().map(|p| p.coords[k]).collect();
            let mean = stats::mean(&coords);
            let se = stats::stderr_of_mean(&coords);
            assert!(
                (mean - centroid[k]).abs() <= 5.0 * se.max(1e-12),
                "facet {fid} axis {k}: mean {mean:.5} vs centroid {:.5} (se {se:.2e})",
                centroid[k]
            );
        }
    }
}

#[test]
fn ks_uniformity_of_cube_facet_marginals() {
    let cube = make_cube(3).unwrap();
    let n = 100_000usize;
    let batch = sample_boundary(&cube, n, 4242);
    // facet 0 is x_1 = 0; the in-facet coordinates are x_2, x_3
    let mut per_axis: Vec<Vec<f64>> = vec![Vec::new(), Vec::new()];
    for p in &batch.points {
        if p.facet_id == 0 {
            per_axis[0].push(p.coords[1]);
            per_axis[1].push(p.coords[2]);
        }
    }
    for coords in &mut per_axis {
        let m = coords.len();
        let d = stats::ks_statistic_uniform(coords);
        let crit = stats::ks_critical(1e-3, m);
        assert!(d < crit, "KS {d:.5} >= critical {crit:.5} at m = {m}");
    }
}

#[test]
fn occupancy_bound_holds_in_at_least_99_of_100_seeds() {
    let cube = make_cube(3).unwrap();
    let n = 10_000usize;
    let mut passes = 0;
    for seed in 0..100u64 {
        let batch = sample_boundary(&cube, n, seed);
        let (_, ok) = facet_occupancy_check(&batch, &cube);
        if ok {
            passes += 1;
        }
    }
    assert!(passes >= 99, "occupancy bound held in only {passes}/100 runs");
}
