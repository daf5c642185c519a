//! Classification of hull facets against the source polytope and the
//! decomposition of the missed volume.
//!
//! A merged facet either lies inside a facet of the polytope (all of its
//! vertices carry the same provenance facet id and the support planes agree)
//! or it is a proper facet spanning at least two polytope facets. Every
//! proper facet is assigned the unique polytope vertex whose normal cone
//! contains the facet's outward normal; the pyramids over the proper facets
//! with apex at the assigned vertex cover the missed volume up to a
//! remainder that shrinks strictly faster.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg;
use crate::polytope::SimplePolytope;
use crate::sampler::SampleBatch;
use crate::ClassifyError;

use super::HullMesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetKind {
    /// Contained in a facet of the polytope.
    BoundaryCoincident,
    /// Formed by points from at least two different polytope facets.
    Proper,
}

#[derive(Debug, Clone)]
pub struct FacetClass {
    pub kind: FacetKind,
    /// Distinct provenance facet ids among the hull facet's vertices.
    pub touched_p_facets: usize,
    /// For proper facets: the polytope vertex whose normal cone contains the
    /// outward normal.
    pub assigned_vertex: Option<usize>,
    /// For boundary-coincident facets: the matching polytope facet.
    pub matched_p_facet: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct FacetClassification {
    pub per_facet: Vec<FacetClass>,
    /// touched_p_facets -> number of proper facets with that signature.
    pub touched_histogram: BTreeMap<usize, usize>,
    /// Normals that needed the loose 1e-9 cone slack (measure-zero ties).
    pub tie_events: usize,
}

impl FacetClassification {
    pub fn proper_count(&self) -> usize {
        self.per_facet
            .iter()
            .filter(|c| c.kind == FacetKind::Proper)
            .count()
    }

    pub fn boundary_coincident_count(&self) -> usize {
        self.per_facet.len() - self.proper_count()
    }
}

/// Classifies every merged facet of `mesh`, which must have been built from
/// `batch.points` in order.
pub fn classify_facets(
    mesh: &HullMesh,
    batch: &SampleBatch,
    poly: &SimplePolytope,
) -> Result<FacetClassification, ClassifyError> {
    let mut per_facet = Vec::with_capacity(mesh.merged_facets.len());
    let mut touched_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut tie_events = 0usize;
    for mf in &mesh.merged_facets {
        let provenance: BTreeSet<usize> = mf
            .vertex_ids
            .iter()
            .map(|&v| batch.points[v].facet_id)
            .collect();
        let touched = provenance.len();
        if touched == 1 {
            let pid = *provenance.iter().next().expect("nonempty");
            let pf = &poly.facets()[pid].support;
            let ndist: f64 = mf
                .normal
                .iter()
                .zip(&pf.normal)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let hdist = (mf.offset - pf.offset).abs();
            if ndist <= 1e-9 && hdist <= 1e-9 * (1.0 + pf.offset.abs()) {
                per_facet.push(FacetClass {
                    kind: FacetKind::BoundaryCoincident,
                    touched_p_facets: 1,
                    assigned_vertex: None,
                    matched_p_facet: Some(pid),
                });
                continue;
            }
            // points of one polytope facet span exactly that facet's plane,
            // so a mismatch means the mesh is corrupt
            return Err(ClassifyError::Geometry(crate::GeometryError::Internal(
                "single-provenance facet off its polytope facet plane",
            )));
        }
        let assigned = match poly.vertex_for_direction(&mf.normal, 1e-12)? {
            Some(v) => v,
            None => {
                tie_events += 1;
                poly.vertex_for_direction(&mf.normal, 1e-9)?
                    .ok_or(ClassifyError::UnassignedNormal)?
            }
        };
        *touched_histogram.entry(touched).or_insert(0) += 1;
        per_facet.push(FacetClass {
            kind: FacetKind::Proper,
            touched_p_facets: touched,
            assigned_vertex: Some(assigned),
            matched_p_facet: None,
        });
    }
    Ok(FacetClassification {
        per_facet,
        touched_histogram,
        tie_events,
    })
}

/// Splits the missed volume V(P) - V(hull) into the pyramid part (over the
/// proper facets, apex at the assigned vertex) and the remainder.
pub fn volume_decomposition(
    mesh: &HullMesh,
    classification: &FacetClassification,
    poly: &SimplePolytope,
) -> Result<(f64, f64), ClassifyError> {
    let n = mesh.dim as f64;
    let mut v_cn = 0.0;
    for (mf, class) in mesh.merged_facets.iter().zip(&classification.per_facet) {
        if class.kind != FacetKind::Proper {
            continue;
        }
        let apex = &poly.vertices()[class.assigned_vertex.expect("proper facets are assigned")];
        let height = linalg::dot(&mf.normal, apex) - mf.offset;
        v_cn += height.max(0.0) * mf.area / n;
    }
    let v_dn = poly.volume() - mesh.volume - v_cn;
    let tol = 1e-9 * poly.volume().max(1.0);
    if v_cn < -tol {
        return Err(ClassifyError::NegativeRemainder(v_cn));
    }
    if v_dn < -tol {
        return Err(ClassifyError::NegativeRemainder(v_dn));
    }
    Ok((v_cn, v_dn))
}
