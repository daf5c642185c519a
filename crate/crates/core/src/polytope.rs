//! Simple polytopes: builders, validation, face lattice, flag counting and
//! normal-cone membership.
//!
//! A polytope is stored in combined vertex/halfspace form. Construction goes
//! through one assembly path that validates the invariants (every vertex on
//! its facet planes, halfspace containment, exactly n facets per vertex),
//! builds the face lattice as the intersection closure of the facet vertex
//! sets, counts flags by dynamic programming over the lattice, and
//! triangulates every facet by a fan from its lowest-index vertex.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::hull;
use crate::linalg;
use crate::GeometryError;

pub type Point = Vec<f64>;

/// Supporting hyperplane { x : <x, normal> = offset } with unit outer normal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// One facet: its vertices, supporting hyperplane, area and triangulation.
#[derive(Debug, Clone)]
pub struct FacetSpec {
    pub vertex_ids: Vec<usize>,
    pub support: Hyperplane,
    /// (n-1)-dimensional Hausdorff measure.
    pub area: f64,
    /// Fan triangulation into (n-1)-simplices, each an n-tuple of vertex ids.
    pub triangulation: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct SimplePolytope {
    dimension: usize,
    vertices: Vec<Point>,
    facets: Vec<FacetSpec>,
    /// vertex id -> sorted incident facet ids (exactly n of them).
    vertex_facet_incidence: Vec<Vec<usize>>,
    surface_area: f64,
    flag_count: u64,
    /// Flag count of each facet viewed as an (n-1)-polytope.
    facet_flags: Vec<u64>,
    volume: f64,
    id: String,
}

/// Vertex-set bitmask of a face. Supports polytopes with up to 128 vertices.
type Mask = u128;

impl SimplePolytope {
    pub fn dimension(&self) -> usize {
        self.dimension
    }
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
    pub fn facets(&self) -> &[FacetSpec] {
        &self.facets
    }
    pub fn vertex_facet_incidence(&self) -> &[Vec<usize>] {
        &self.vertex_facet_incidence
    }
    pub fn surface_area(&self) -> f64 {
        self.surface_area
    }
    pub fn flag_count(&self) -> u64 {
        self.flag_count
    }
    /// Flag counts of the facets as standalone (n-1)-polytopes; these sum to
    /// the flag count of the polytope itself.
    pub fn facet_flag_counts(&self) -> &[u64] {
        &self.facet_flags
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    /// Content hash, stable across runs; used as batch provenance.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// True when `u` lies in the normal cone of vertex `v`: u must be a
    /// nonnegative combination of the n facet normals at v (coefficients
    /// allowed down to -1e-12). `slack` loosens that bound for tie handling.
    pub fn normal_cone_contains_slack(
        &self,
        v: usize,
        u: &[f64],
        slack: f64,
    ) -> Result<bool, GeometryError> {
        let n = self.dimension;
        let mut a = vec![0.0; n * n];
        for (col, &fid) in self.vertex_facet_incidence[v].iter().enumerate() {
            for row in 0..n {
                a[row * n + col] = self.facets[fid].support.normal[row];
            }
        }
        let mut c = u.to_vec();
        if !linalg::solve_in_place(&mut a, &mut c, n, 1e-12) {
            return Err(GeometryError::Internal(
                "singular incidence system in normal-cone test",
            ));
        }
        Ok(c.iter().all(|&x| x >= -slack))
    }

    pub fn normal_cone_contains(&self, v: usize, u: &[f64]) -> Result<bool, GeometryError> {
        self.normal_cone_contains_slack(v, u, 1e-12)
    }

    /// First vertex (in id order) whose normal cone contains `u`.
    pub fn vertex_for_direction(&self, u: &[f64], slack: f64) -> Result<Option<usize>, GeometryError> {
        for v in 0..self.vertices.len() {
            if self.normal_cone_contains_slack(v, u, slack)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dimension: self.dimension,
            vertices: self.vertices.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetJson {
                    vertex_ids: f.vertex_ids.clone(),
                    normal: f.support.normal.clone(),
                    offset: f.support.offset,
                })
                .collect(),
        }
    }
}

/// Exchange format: combined vertex/halfspace description. The loader
/// revalidates every polytope invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<FacetJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetJson {
    pub vertex_ids: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

pub fn from_json(json: &PolytopeJson) -> Result<SimplePolytope, GeometryError> {
    let planes = json
        .facets
        .iter()
        .map(|f| (f.normal.clone(), f.offset, f.vertex_ids.clone()))
        .collect();
    assemble(json.dimension, json.vertices.clone(), planes)
}

/// Unit cube [0,1]^n.
pub fn make_cube(n: usize) -> Result<SimplePolytope, GeometryError> {
    check_dim(n)?;
    let count = 1usize << n;
    let vertices: Vec<Point> = (0..count)
        .map(|mask| (0..n).map(|k| ((mask >> k) & 1) as f64).collect())
        .collect();
    let mut planes = Vec::with_capacity(2 * n);
    for axis in 0..n {
        for side in 0..2usize {
            let mut normal = vec![0.0; n];
            normal[axis] = if side == 0 { -1.0 } else { 1.0 };
            let offset = if side == 0 { 0.0 } else { 1.0 };
            let verts: Vec<usize> = (0..count).filter(|m| (m >> axis) & 1 == side).collect();
            planes.push((normal, offset, verts));
        }
    }
    assemble(n, vertices, planes)
}

/// Simplex on the origin and the standard basis vectors.
pub fn make_simplex(n: usize) -> Result<SimplePolytope, GeometryError> {
    check_dim(n)?;
    let mut vertices: Vec<Point> = vec![vec![0.0; n]];
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        vertices.push(v);
    }
    let mut planes = Vec::with_capacity(n + 1);
    for k in 0..n {
        let mut normal = vec![0.0; n];
        normal[k] = -1.0;
        let verts: Vec<usize> = (0..=n).filter(|&v| v != k + 1).collect();
        planes.push((normal, 0.0, verts));
    }
    let root = (n as f64).sqrt();
    planes.push((vec![1.0 / root; n], 1.0 / root, (1..=n).collect()));
    assemble(n, vertices, planes)
}

/// Prism over the (n-1)-simplex: base x [0,1]. Simple, with n+2 facets.
pub fn make_prism(n: usize) -> Result<SimplePolytope, GeometryError> {
    check_dim(n)?;
    if n < 3 {
        return Err(GeometryError::DimensionOutOfRange { n });
    }
    let base = make_simplex(n - 1)?;
    let bn = base.vertices().len();
    let mut vertices: Vec<Point> = Vec::with_capacity(2 * bn);
    for height in [0.0, 1.0] {
        for v in base.vertices() {
            let mut p = v.clone();
            p.push(height);
            vertices.push(p);
        }
    }
    let mut planes = Vec::new();
    {
        let mut normal = vec![0.0; n];
        normal[n - 1] = -1.0;
        planes.push((normal, 0.0, (0..bn).collect::<Vec<_>>()));
        let mut normal = vec![0.0; n];
        normal[n - 1] = 1.0;
        planes.push((normal, 1.0, (bn..2 * bn).collect::<Vec<_>>()));
    }
    for f in base.facets() {
        let mut normal = f.support.normal.clone();
        normal.push(0.0);
        let mut verts: Vec<usize> = f.vertex_ids.clone();
        verts.extend(f.vertex_ids.iter().map(|&v| v + bn));
        planes.push((normal, f.support.offset, verts));
    }
    assemble(n, vertices, planes)
}

/// Builds a polytope by name: "cube-3", "simplex-4", "prism-3".
pub fn builtin(name: &str) -> Option<Result<SimplePolytope, GeometryError>> {
    let (kind, dim) = name.rsplit_once('-')?;
    let n: usize = dim.parse().ok()?;
    match kind {
        "cube" => Some(make_cube(n)),
        "simplex" => Some(make_simplex(n)),
        "prism" => Some(make_prism(n)),
        _ => None,
    }
}

/// Recovers the full polytope from its vertex set via the convex hull.
/// Rejects degenerate input and polytopes that are not simple.
pub fn from_vertices(points: &[Point]) -> Result<SimplePolytope, GeometryError> {
    let n = points.first().map(|p| p.len()).unwrap_or(0);
    check_dim(n)?;
    let mesh = hull::convex_hull(points).map_err(GeometryError::HullFailed)?;
    if mesh.f0 != points.len() {
        let missing = (0..points.len())
            .find(|i| !mesh.hull_vertex_ids.contains(i))
            .unwrap_or(0);
        return Err(GeometryError::DegenerateInput(format!(
            "point {missing} is not a vertex of the convex hull"
        )));
    }
    let planes = mesh
        .merged_facets
        .iter()
        .map(|f| (f.normal.clone(), f.offset, f.vertex_ids.clone()))
        .collect();
    assemble(n, points.to_vec(), planes)
}

fn check_dim(n: usize) -> Result<(), GeometryError> {
    if !(2..=6).contains(&n) {
        return Err(GeometryError::DimensionOutOfRange { n });
    }
    Ok(())
}

fn assemble(
    dimension: usize,
    vertices: Vec<Point>,
    planes: Vec<(Vec<f64>, f64, Vec<usize>)>,
) -> Result<SimplePolytope, GeometryError> {
    check_dim(dimension)?;
    if vertices.len() > 128 {
        return Err(GeometryError::DegenerateInput(format!(
            "flag enumeration supports at most 128 vertices, got {}",
            vertices.len()
        )));
    }
    for (i, v) in vertices.iter().enumerate() {
        if v.len() != dimension || v.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::DegenerateInput(format!(
                "vertex {i} is not a finite point of dimension {dimension}"
            )));
        }
    }

    // validate planes: unit normals, listed vertices on the plane, all
    // vertices inside the halfspace
    for (fid, (normal, offset, verts)) in planes.iter().enumerate() {
        if (linalg::norm(normal) - 1.0).abs() > 1e-12 {
            return Err(GeometryError::DegenerateInput(format!(
                "facet {fid} normal is not unit length"
            )));
        }
        let tol = 1e-9 * (1.0 + offset.abs());
        for &v in verts {
            let d = linalg::dot(normal, &vertices[v]) - offset;
            if d.abs() > tol {
                return Err(GeometryError::VertexOffPlane { vertex: v, facet: fid });
            }
        }
        for (v, p) in vertices.iter().enumerate() {
            if linalg::dot(normal, p) - offset > tol {
                return Err(GeometryError::HalfspaceViolated { vertex: v, facet: fid });
            }
        }
    }

    // incidence and simplicity
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (fid, (_, _, verts)) in planes.iter().enumerate() {
        for &v in verts {
            incidence[v].push(fid);
        }
    }
    for (v, inc) in incidence.iter().enumerate() {
        if inc.len() != dimension {
            return Err(GeometryError::NotSimple {
                vertex: v,
                facet_count: inc.len(),
                dimension,
            });
        }
    }

    // face lattice = intersection closure of the facet vertex sets
    let facet_masks: Vec<Mask> = planes
        .iter()
        .map(|(_, _, verts)| verts.iter().fold(0 as Mask, |m, &v| m | (1 << v)))
        .collect();
    let lattice = FaceLattice::build(dimension, &vertices, &facet_masks)?;
    let (flag_count, facet_flags) = lattice.count_flags(&facet_masks)?;

    // triangulations and areas
    let mut facets = Vec::with_capacity(planes.len());
    let mut surface_area = 0.0;
    let mut volume = 0.0;
    let mut tri_cache: BTreeMap<Mask, Vec<Vec<usize>>> = BTreeMap::new();
    for (fid, (normal, offset, verts)) in planes.iter().enumerate() {
        let triangulation = lattice.triangulate(facet_masks[fid], &mut tri_cache);
        let mut area = 0.0;
        for simplex in &triangulation {
            let refs: Vec<&[f64]> = simplex.iter().map(|&v| vertices[v].as_slice()).collect();
            area += linalg::simplex_volume(&refs);
        }
        surface_area += area;
        volume += offset * area / dimension as f64;
        let mut vertex_ids = verts.clone();
        vertex_ids.sort_unstable();
        facets.push(FacetSpec {
            vertex_ids,
            support: Hyperplane {
                normal: normal.clone(),
                offset: *offset,
            },
            area,
            triangulation,
        });
    }

    let mut poly = SimplePolytope {
        dimension,
        vertices,
        facets,
        vertex_facet_incidence: incidence,
        surface_area,
        flag_count,
        facet_flags,
        volume,
        id: String::new(),
    };
    let canonical = serde_json::to_string(&poly.to_json()).expect("polytope serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    poly.id = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    Ok(poly)
}

/// Face lattice of a polytope, keyed by vertex-set masks.
struct FaceLattice {
    dimension: usize,
    /// faces[d] = masks of the d-dimensional faces, sorted.
    faces: Vec<Vec<Mask>>,
}

impl FaceLattice {
    fn build(
        dimension: usize,
        vertices: &[Point],
        facet_masks: &[Mask],
    ) -> Result<Self, GeometryError> {
        let mut seen: std::collections::BTreeSet<Mask> = facet_masks.iter().copied().collect();
        let mut frontier: Vec<Mask> = seen.iter().copied().collect();
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            for &m in &frontier {
                for &f in facet_masks {
                    let meet = m & f;
                    if meet != 0 && meet != m && !seen.contains(&meet) {
                        seen.insert(meet);
                        fresh.push(meet);
                    }
                }
            }
            frontier = fresh;
        }

        let scale = vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |a, &b| a.max(b.abs()))
            .max(1.0);
        let mut faces = vec![Vec::new(); dimension];
        for mask in seen {
            let pts: Vec<&[f64]> = mask_members(mask)
                .map(|v| vertices[v].as_slice())
                .collect();
            let d = linalg::affine_rank(&pts, 1e-9 * scale);
            if d >= dimension {
                return Err(GeometryError::DegenerateInput(
                    "facet intersection is full-dimensional".into(),
                ));
            }
            faces[d].push(mask);
        }
        for level in &mut faces {
            level.sort_unstable();
        }
        // every vertex must itself appear as a 0-face
        let nv = vertices.len();
        for v in 0..nv {
            if !faces[0].contains(&(1 << v)) {
                return Err(GeometryError::DegenerateInput(format!(
                    "vertex {v} is not the unique intersection of its facets"
                )));
            }
        }
        Ok(FaceLattice { dimension, faces })
    }

    /// Counts maximal chains F_0 in F_1 in ... in F_{n-1} by dynamic
    /// programming; the per-facet values equal the flag counts of the facets
    /// as standalone polytopes.
    fn count_flags(&self, facet_masks: &[Mask]) -> Result<(u64, Vec<u64>), GeometryError> {
        let mut counts: BTreeMap<Mask, u64> = self.faces[0].iter().map(|&m| (m, 1)).collect();
        for d in 1..self.dimension {
            let mut next: BTreeMap<Mask, u64> = BTreeMap::new();
            for &m in &self.faces[d] {
                let mut total = 0u64;
                for (&sub, &c) in &counts {
                    if sub & m == sub {
                        total += c;
                    }
                }
                next.insert(m, total);
            }
            counts = next;
        }
        let facet_flags: Vec<u64> = facet_masks
            .iter()
            .map(|m| counts.get(m).copied().unwrap_or(0))
            .collect();
        let total = facet_flags.iter().sum::<u64>();
        if total == 0 {
            return Err(GeometryError::DegenerateInput("empty flag count".into()));
        }
        Ok((total, facet_flags))
    }

    /// Fan triangulation of a face: apex at the lowest-index vertex, recursing
    /// into the subfaces that avoid the apex.
    fn triangulate(&self, mask: Mask, cache: &mut BTreeMap<Mask, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
        if let Some(t) = cache.get(&mask) {
            return t.clone();
        }
        let dim = self
            .faces
            .iter()
            .position(|level| level.binary_search(&mask).is_ok())
            .expect("face mask present in lattice");
        let result = if dim == 0 {
            vec![vec![mask.trailing_zeros() as usize]]
        } else {
            let apex = mask.trailing_zeros() as usize;
            let mut simplices = Vec::new();
            for &sub in &self.faces[dim - 1] {
                if sub & mask == sub && sub & (1 << apex) == 0 {
                    for s in self.triangulate(sub, cache) {
                        let mut simplex = vec![apex];
                        simplex.extend(s);
                        simplices.push(simplex);
                    }
                }
            }
            simplices
        };
        cache.insert(mask, result.clone());
        result
    }
}

fn mask_members(mask: Mask) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&v| mask & (1 << v) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_combinatorics() {
        let c = make_cube(3).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert!((c.surface_area() - 6.0).abs() < 1e-12);
        assert!((c.volume() - 1.0).abs() < 1e-12);
        assert_eq!(c.flag_count(), 48);
        for inc in c.vertex_facet_incidence() {
            assert_eq!(inc.len(), 3);
        }
    }

    #[test]
    fn cube_flags_match_closed_form() {
        // 2^n * n!
        for n in 2..=4 {
            let expect = (1u64 << n) * (1..=n as u64).product::<u64>();
            assert_eq!(make_cube(n).unwrap().flag_count(), expect, "n={n}");
        }
    }

    #[test]
    fn square_flag_count() {
        assert_eq!(make_cube(2).unwrap().flag_count(), 8);
    }

    #[test]
    fn simplex_combinatorics() {
        let s = make_simplex(3).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.facets().len(), 4);
        assert_eq!(s.flag_count(), 24);
        assert!((s.volume() - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(make_simplex(4).unwrap().flag_count(), 120);
    }

    #[test]
    fn prism_is_simple_with_five_facets() {
        let p = make_prism(3).unwrap();
        assert_eq!(p.facets().len(), 5);
        assert_eq!(p.vertices().len(), 6);
        for inc in p.vertex_facet_incidence() {
            assert_eq!(inc.len(), 3);
        }
        // triangular prism: 6 vertices x 3 edges x 2 facets per (vertex, edge)
        assert_eq!(p.flag_count(), 36);
    }

    #[test]
    fn facet_flags_sum_to_polytope_flags() {
        for poly in [make_cube(3).unwrap(), make_simplex(4).unwrap(), make_prism(3).unwrap()] {
            let total: u64 = poly.facet_flag_counts().iter().sum();
            assert_eq!(total, poly.flag_count());
        }
    }

    #[test]
    fn facet_flags_match_standalone_bodies() {
        // cube facets are (n-1)-cubes, simplex facets are (n-1)-simplices
        let c4 = make_cube(4).unwrap();
        let cube3_flags = make_cube(3).unwrap().flag_count();
        for &f in c4.facet_flag_counts() {
            assert_eq!(f, cube3_flags);
        }
        let s4 = make_simplex(4).unwrap();
        let simplex3_flags = make_simplex(3).unwrap().flag_count();
        for &f in s4.facet_flag_counts() {
            assert_eq!(f, simplex3_flags);
        }
    }

    #[test]
    fn dimension_bounds_enforced() {
        assert!(make_cube(1).is_err());
        assert!(make_cube(7).is_err());
    }

    #[test]
    fn normal_cone_membership() {
        let c = make_cube(3).unwrap();
        let origin = c
            .vertices()
            .iter()
            .position(|v| v.iter().all(|&x| x == 0.0))
            .unwrap();
        let ones = c
            .vertices()
            .iter()
            .position(|v| v.iter().all(|&x| x == 1.0))
            .unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(c.normal_cone_contains(origin, &[-s, -s, -s]).unwrap());
        assert!(!c.normal_cone_contains(origin, &[1.0, 0.0, 0.0]).unwrap());
        assert!(c.normal_cone_contains(ones, &[s, s, s]).unwrap());
    }

    #[test]
    fn from_vertices_rebuilds_the_cube() {
        let cube = make_cube(3).unwrap();
        let rebuilt = from_vertices(cube.vertices()).unwrap();
        assert_eq!(rebuilt.facets().len(), 6);
        assert_eq!(rebuilt.flag_count(), 48);
        assert!((rebuilt.surface_area() - cube.surface_area()).abs() < 1e-9);
        assert!((rebuilt.volume() - cube.volume()).abs() < 1e-9);
    }

    #[test]
    fn octahedron_rejected_as_non_simple() {
        let mut pts = Vec::new();
        for k in 0..3 {
            for s in [-1.0, 1.0] {
                let mut p = vec![0.0; 3];
                p[k] = s;
                pts.push(p);
            }
        }
        match from_vertices(&pts) {
            Err(GeometryError::NotSimple { facet_count, .. }) => assert_eq!(facet_count, 4),
            other => panic!("expected non-simple rejection, got {other:?}"),
        }
    }

    #[test]
    fn prism_from_vertices() {
        let p = make_prism(3).unwrap();
        let rebuilt = from_vertices(p.vertices()).unwrap();
        assert_eq!(rebuilt.facets().len(), 5);
    }

    #[test]
    fn json_roundtrip_revalidates() {
        let c = make_cube(3).unwrap();
        let json = c.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: PolytopeJson = serde_json::from_str(&text).unwrap();
        let back = from_json(&parsed).unwrap();
        assert_eq!(back.flag_count(), 48);
        assert_eq!(back.id(), c.id());
    }

    #[test]
    fn builtin_names() {
        assert!(builtin("cube-3").unwrap().is_ok());
        assert!(builtin("simplex-4").unwrap().is_ok());
        assert!(builtin("prism-3").unwrap().is_ok());
        assert!(builtin("ball-3").is_none());
    }
}
