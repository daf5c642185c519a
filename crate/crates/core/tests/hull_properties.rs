//! Property tests of the hull kernel: containment, monotonicity under point
//! insertion, and agreement with the exhaustive oracle on random batches.

use proptest::prelude::*;

use hullaw_core::hull::{classify_facets, volume_decomposition, FacetKind};
use hullaw_core::oracle::brute_force_hull_3d;
use hullaw_core::polytope::{make_cube, make_simplex};
use hullaw_core::sampler::sample_boundary;
use hullaw_core::{convex_hull, from_vertices};

fn point3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_contains_every_input_point(pts in prop::collection::vec(point3(), 8..40)) {
        if let Ok(mesh) = convex_hull(&pts) {
            prop_assert!(mesh.contains_all(&pts), "violation {:.3e}", mesh.max_violation(&pts));
            prop_assert!(mesh.volume >= 0.0);
            prop_assert_eq!(mesh.f0, mesh.hull_vertex_ids.len());
        }
    }

    #[test]
    fn adding_a_point_never_shrinks_the_hull(
        pts in prop::collection::vec(point3(), 8..30),
        extra in point3(),
    ) {
        if let Ok(before) = convex_hull(&pts) {
            let mut bigger = pts.clone();
            bigger.push(extra);
            let after = convex_hull(&bigger).unwrap();
            prop_assert!(after.volume >= before.volume - 1e-12,
                "volume dropped from {} to {}", before.volume, after.volume);
        }
    }

    #[test]
    fn boundary_batches_match_the_oracle(seed in 0u64..5000, n in 6usize..=14) {
        let cube = make_cube(3).unwrap();
        let batch = sample_boundary(&cube, n, seed);
        let coords = batch.coords();
        if let Some(oracle) = brute_force_hull_3d(&coords) {
            let mesh = convex_hull(&coords).unwrap();
            prop_assert_eq!(mesh.f0, oracle.f0);
            prop_assert_eq!(mesh.f_top, oracle.f_top);
            prop_assert_eq!(&mesh.hull_vertex_ids, &oracle.vertex_ids);
            prop_assert!((mesh.volume - oracle.volume).abs() <= 1e-9 * oracle.volume.max(1e-30));
        }
    }
}

#[test]
fn hull_of_polytope_vertices_decomposes_trivially() {
    // feeding the polytope's own vertices: no proper facets, V_CN = V_DN = 0
    for poly in [make_cube(3).unwrap(), make_simplex(3).unwrap()] {
        let rebuilt = from_vertices(poly.vertices()).unwrap();
        assert_eq!(rebuilt.facets().len(), poly.facets().len());
        let mesh = convex_hull(poly.vertices()).unwrap();
        assert!((mesh.volume - poly.volume()).abs() <= 1e-12);
    }
}

#[test]
fn decomposition_identity_on_boundary_batches() {
    let cube = make_cube(3).unwrap();
    for seed in 0..20u64 {
        let batch = sample_boundary(&cube, 1000, seed);
        let mesh = convex_hull(&batch.coords()).unwrap();
        let classification = classify_facets(&mesh, &batch, &cube).unwrap();
        let (v_cn, v_dn) = volume_decomposition(&mesh, &classification, &cube).unwrap();
        let vol_diff = cube.volume() - mesh.volume;
        assert!((v_cn + v_dn - vol_diff).abs() <= 1e-9, "identity violated at seed {seed}");
        assert!(v_cn >= -1e-9 && v_dn >= -1e-9);
        // boundary-coincident facets are capped by the cube's facet count
        assert!(classification.boundary_coincident_count() <= 6);
        for class in &classification.per_facet {
            match class.kind {
                FacetKind::Proper => assert!(class.touched_p_facets >= 2),
                FacetKind::BoundaryCoincident => assert_eq!(class.touched_p_facets, 1),
            }
        }
    }
}

#[test]
fn cross_facet_signature_dominated_by_two_facet_contacts() {
    // fraction of proper facets touching exactly two polytope facets exceeds
    // one half and grows with N
    let cube = make_cube(3).unwrap();
    let fraction_at = |n: usize| -> f64 {
        let mut two = 0usize;
        let mut total = 0usize;
        for seed in 0..50u64 {
            let batch = sample_boundary(&cube, n, 9000 + seed);
            let mesh = convex_hull(&batch.coords()).unwrap();
            let classification = classify_facets(&mesh, &batch, &cube).unwrap();
            for class in &classification.per_facet {
                if class.kind == FacetKind::Proper {
                    total += 1;
                    if class.touched_p_facets == 2 {
                        two += 1;
                    }
                }
            }
        }
        two as f64 / total as f64
    };
    let small = fraction_at(500);
    let large = fraction_at(2000);
    assert!(small > 0.5, "fraction at N=500 is {small:.3}");
    assert!(large > small, "no growth: {small:.3} -> {large:.3}");
}

#[test]
fn hull_errors_are_descriptive() {
    let too_few = convex_hull(&[vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]]);
    assert!(matches!(too_few, Err(hullaw_core::HullError::TooFewPoints { .. })));
}
