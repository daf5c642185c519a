//! Convex hull of a point set in R^n with coplanar-facet merging.
//!
//! The simplicial complex from the incremental kernel is grouped by common
//! support plane (normals within 1e-9, offsets within 1e-9 * diameter,
//! adjacent groups only), which turns the sliver triangulations produced by
//! exactly coplanar inputs into single geometric facets. Vertices of a merged
//! facet are recovered recursively: facet members are projected into the
//! facet plane and the extreme points of the lower-dimensional set are kept.

mod classify;
mod kernel;

pub use classify::{classify_facets, volume_decomposition, FacetClassification, FacetKind};

use crate::linalg;
use crate::HullError;

/// Angular tolerance for treating two facet normals as equal.
pub const MERGE_NORMAL_TOL: f64 = 1e-9;
/// Offset tolerance, relative to the input diameter.
pub const MERGE_OFFSET_REL: f64 = 1e-9;
/// Containment tolerance, relative to the input diameter.
pub const CONTAINMENT_REL: f64 = 1e-9;

/// One geometric facet of the hull after coplanar merging.
#[derive(Debug, Clone)]
pub struct MergedFacet {
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// Support offset: the facet lies on { x : <x, normal> = offset }.
    pub offset: f64,
    /// Input indices of the facet's vertices (extreme points of the facet).
    pub vertex_ids: Vec<usize>,
    /// Simplicial cells tiling the facet, as input-index tuples of length dim.
    pub simplicial_cells: Vec<Vec<u32>>,
    /// (dim-1)-dimensional measure, summed over the simplicial cells.
    pub area: f64,
}

/// Convex hull with merged facets, f-vector entries and volume.
#[derive(Debug, Clone)]
pub struct HullMesh {
    pub dim: usize,
    /// Sorted input indices of the extreme points.
    pub hull_vertex_ids: Vec<usize>,
    pub merged_facets: Vec<MergedFacet>,
    /// Number of vertices (= hull_vertex_ids.len()).
    pub f0: usize,
    /// Number of merged facets.
    pub f_top: usize,
    pub volume: f64,
    /// Largest axis-aligned extent of the input, used for tolerances.
    pub diameter: f64,
}

impl HullMesh {
    /// Maximum signed distance of any point to any merged facet; inputs that
    /// produced the hull must stay below `CONTAINMENT_REL * diameter`.
    pub fn max_violation(&self, points: &[Vec<f64>]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for f in &self.merged_facets {
            for p in points {
                worst = worst.max(linalg::dot(&f.normal, p) - f.offset);
            }
        }
        worst
    }

    pub fn contains_all(&self, points: &[Vec<f64>]) -> bool {
        self.max_violation(points) <= CONTAINMENT_REL * self.diameter
    }
}

/// Builds the hull of `points` (each of the same dimension >= 2).
pub fn convex_hull(points: &[Vec<f64>]) -> Result<HullMesh, HullError> {
    let dim = points
        .first()
        .map(|p| p.len())
        .ok_or(HullError::TooFewPoints { needed: 3, got: 0 })?;
    if dim < 2 {
        return Err(HullError::DimensionMismatch { expected: 2, got: dim });
    }
    let simplicial = kernel::build(points, dim)?;
    merge(points, simplicial)
}

fn merge(points: &[Vec<f64>], s: kernel::Simplicial) -> Result<HullMesh, HullError> {
    let dim = s.dim;
    let alive: Vec<usize> = (0..s.facets.len()).filter(|&i| s.facets[i].alive).collect();
    if alive.is_empty() {
        return Err(HullError::Internal("no facets survived"));
    }

    // union-find over adjacent coplanar facets
    let mut parent: Vec<usize> = (0..s.facets.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let offset_tol = MERGE_OFFSET_REL * s.scale;
    for &i in &alive {
        let fi = &s.facets[i];
        for &nbu in &fi.neighbors {
            let j = nbu as usize;
            if j <= i || !s.facets[j].alive {
                continue;
            }
            let fj = &s.facets[j];
            let ndist2: f64 = fi
                .normal
                .iter()
                .zip(&fj.normal)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if ndist2 <= MERGE_NORMAL_TOL * MERGE_NORMAL_TOL
                && (fi.offset - fj.offset).abs() <= offset_tol
            {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for &i in &alive {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    let mut merged_facets = Vec::with_capacity(groups.len());
    let mut vertex_set: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    for group in groups.values() {
        let mf = build_merged(points, &s, group)?;
        vertex_set.extend(mf.vertex_ids.iter().copied());
        merged_facets.push(mf);
    }

    let hull_vertex_ids: Vec<usize> = vertex_set.into_iter().collect();
    let f0 = hull_vertex_ids.len();
    let f_top = merged_facets.len();

    // volume: pyramids from the vertex centroid over every simplicial cell
    let mut centroid = vec![0.0; dim];
    for &v in &hull_vertex_ids {
        for k in 0..dim {
            centroid[k] += points[v][k];
        }
    }
    for x in &mut centroid {
        *x /= f0 as f64;
    }
    let mut factorial = 1.0;
    for i in 1..=dim {
        factorial *= i as f64;
    }
    let mut volume = 0.0;
    let mut det_buf = vec![0.0; dim * dim];
    for mf in &merged_facets {
        for cell in &mf.simplicial_cells {
            for (r, &v) in cell.iter().enumerate() {
                for k in 0..dim {
                    det_buf[r * dim + k] = points[v as usize][k] - centroid[k];
                }
            }
            volume += linalg::det_in_place(&mut det_buf, dim).abs() / factorial;
        }
    }

    Ok(HullMesh {
        dim,
        hull_vertex_ids,
        merged_facets,
        f0,
        f_top,
        volume,
        diameter: s.scale,
    })
}

fn build_merged(
    points: &[Vec<f64>],
    s: &kernel::Simplicial,
    group: &[usize],
) -> Result<MergedFacet, HullError> {
    let dim = s.dim;
    // area-weighted average support plane for stability across slivers
    let mut normal = vec![0.0; dim];
    let mut offset_acc = 0.0;
    let mut area_acc = 0.0;
    let mut cells = Vec::with_capacity(group.len());
    let mut members: std::collections::BTreeSet<u32> = std::collections::BTreeSet::new();
    for &fi in group {
        let f = &s.facets[fi];
        let refs: Vec<&[f64]> = f.verts.iter().map(|&v| points[v as usize].as_slice()).collect();
        let area = linalg::simplex_volume(&refs);
        for k in 0..dim {
            normal[k] += area * f.normal[k];
        }
        let mut c = vec![0.0; dim];
        for r in &refs {
            for k in 0..dim {
                c[k] += r[k];
            }
        }
        for x in &mut c {
            *x /= dim as f64;
        }
        offset_acc += area * linalg::dot(&f.normal, &c);
        area_acc += area;
        members.extend(f.verts.iter().copied());
        cells.push(f.verts.clone());
    }
    let total_area = area_acc;
    let nn = linalg::norm(&normal);
    if nn <= 0.0 || area_acc <= 0.0 {
        // all-sliver group: fall back to the first facet's plane
        let f = &s.facets[group[0]];
        normal = f.normal.clone();
        offset_acc = f.offset;
        area_acc = 1.0;
    } else {
        for x in &mut normal {
            *x /= nn;
        }
    }
    let offset = offset_acc / area_acc;

    let member_ids: Vec<u32> = members.into_iter().collect();
    let vertex_ids: Vec<usize> = if member_ids.len() == dim {
        member_ids.iter().map(|&v| v as usize).collect()
    } else {
        // project members into the facet plane and keep the extreme points
        let basis = linalg::basis_orthogonal_to(&normal);
        let origin = points[member_ids[0] as usize].clone();
        let projected: Vec<Vec<f64>> = member_ids
            .iter()
            .map(|&v| {
                let rel: Vec<f64> = points[v as usize]
                    .iter()
                    .zip(&origin)
                    .map(|(a, b)| a - b)
                    .collect();
                basis.iter().map(|b| linalg::dot(&rel, b)).collect()
            })
            .collect();
        extreme_points(&projected)?
            .into_iter()
            .map(|local| member_ids[local] as usize)
            .collect()
    };
    let mut vertex_ids = vertex_ids;
    vertex_ids.sort_unstable();

    Ok(MergedFacet {
        normal,
        offset,
        vertex_ids,
        simplicial_cells: cells,
        area: total_area,
    })
}

/// Indices of the extreme points of a full- or lower-dimensional point set,
/// by recursive hulls: degenerate sets are first projected onto their affine
/// span, one-dimensional sets reduce to the two endpoints.
pub fn extreme_points(points: &[Vec<f64>]) -> Result<Vec<usize>, HullError> {
    if points.len() <= 2 {
        return Ok((0..points.len()).collect());
    }
    let dim = points[0].len();
    let refs: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
    let mut span: f64 = 0.0;
    for k in 0..dim {
        let lo = refs.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = refs.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        span = span.max(hi - lo);
    }
    if span <= 0.0 {
        // all points coincide
        return Ok(vec![0]);
    }
    let rank = linalg::affine_rank(&refs, 1e-9 * span);
    if rank == 1 {
        // endpoints along the spanning direction
        let dir: Vec<f64> = {
            let mut best = (0.0, 1usize);
            for (i, p) in refs.iter().enumerate().skip(1) {
                let d = linalg::dist(p, refs[0]);
                if d > best.0 {
                    best = (d, i);
                }
            }
            refs[best.1].iter().zip(refs[0]).map(|(a, b)| a - b).collect()
        };
        let proj: Vec<f64> = refs.iter().map(|p| linalg::dot(p, &dir)).collect();
        let mut lo = 0;
        let mut hi = 0;
        for (i, v) in proj.iter().enumerate() {
            if *v < proj[lo] {
                lo = i;
            }
            if *v > proj[hi] {
                hi = i;
            }
        }
        let mut out = vec![lo, hi];
        out.sort_unstable();
        out.dedup();
        return Ok(out);
    }
    if rank < dim {
        // project onto an orthonormal basis of the affine span and recurse
        let basis = span_basis(&refs, rank, 1e-9 * span);
        let projected: Vec<Vec<f64>> = refs
            .iter()
            .map(|p| {
                let rel: Vec<f64> = p.iter().zip(refs[0]).map(|(a, b)| a - b).collect();
                basis.iter().map(|b| linalg::dot(&rel, b)).collect()
            })
            .collect();
        return extreme_points(&projected);
    }
    let mesh = convex_hull(points)?;
    Ok(mesh.hull_vertex_ids)
}

fn span_basis(refs: &[&[f64]], rank: usize, tol: f64) -> Vec<Vec<f64>> {
    let dim = refs[0].len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rank);
    for p in refs.iter().skip(1) {
        if basis.len() == rank {
            break;
        }
        let mut r: Vec<f64> = p.iter().zip(refs[0]).map(|(a, b)| a - b).collect();
        for b in &basis {
            let proj = linalg::dot(&r, b);
            for k in 0..dim {
                r[k] -= proj * b[k];
            }
        }
        let n = linalg::norm(&r);
        if n > tol {
            for x in &mut r {
                *x /= n;
            }
            basis.push(r);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_corners() -> Vec<Vec<f64>> {
        let mut v = Vec::new();
        for mask in 0..8u32 {
            v.push(vec![
                (mask & 1) as f64,
                ((mask >> 1) & 1) as f64,
                ((mask >> 2) & 1) as f64,
            ]);
        }
        v
    }

    #[test]
    fn cube_hull_has_six_merged_facets() {
        let pts = cube_corners();
        let mesh = convex_hull(&pts).unwrap();
        assert_eq!(mesh.f0, 8);
        assert_eq!(mesh.f_top, 6);
        assert!((mesh.volume - 1.0).abs() < 1e-12);
        assert!(mesh.contains_all(&pts));
        for f in &mesh.merged_facets {
            assert_eq!(f.vertex_ids.len(), 4);
        }
    }

    #[test]
    fn interior_point_is_excluded() {
        let mut pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        pts.push(vec![0.25, 0.25, 0.25]); // centroid
        let mesh = convex_hull(&pts).unwrap();
        assert_eq!(mesh.f0, 4);
        assert_eq!(mesh.f_top, 4);
        assert!((mesh.volume - 1.0 / 6.0).abs() < 1e-12);
        assert!(!mesh.hull_vertex_ids.contains(&4));
    }

    #[test]
    fn coplanar_point_inside_a_face_is_not_a_vertex() {
        let mut pts = cube_corners();
        pts.push(vec![0.5, 0.5, 1.0]); // middle of the top face
        let mesh = convex_hull(&pts).unwrap();
        assert_eq!(mesh.f0, 8);
        assert_eq!(mesh.f_top, 6);
        assert!((mesh.volume - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_input_is_rejected() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.3, 0.7, 0.0],
        ];
        assert!(matches!(convex_hull(&pts), Err(HullError::Degenerate)));
    }

    #[test]
    fn four_dim_cross_polytope() {
        // 16 simplex facets, 8 vertices, volume 2/3 for unit cross-polytope in R^4
        let mut pts = Vec::new();
        for k in 0..4 {
            for s in [-1.0, 1.0] {
                let mut p = vec![0.0; 4];
                p[k] = s;
                pts.push(p);
            }
        }
        let mesh = convex_hull(&pts).unwrap();
        assert_eq!(mesh.f0, 8);
        assert_eq!(mesh.f_top, 16);
        assert!((mesh.volume - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn square_in_the_plane() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
            vec![0.5, 0.0], // on an edge
        ];
        let mesh = convex_hull(&pts).unwrap();
        assert_eq!(mesh.f0, 4);
        assert_eq!(mesh.f_top, 4);
        assert!((mesh.volume - 1.0).abs() < 1e-12);
        assert_eq!(mesh.hull_vertex_ids, vec![0, 1, 2, 3]);
    }
}
