//! Brute-force reference implementations, independent of the incremental
//! hull kernel.
//!
//! Facets come from testing every 3-subset's plane for one-sidedness and
//! merging coplanar supports; extreme points from the Caratheodory test
//! (a point is interior iff it lies in a segment, triangle or tetrahedron of
//! other points); volume from the divergence theorem over the merged facet
//! polygons. Intended for 3-dimensional inputs with at most a few dozen
//! points.

use crate::linalg;

#[derive(Debug, Clone)]
pub struct OracleHull {
    pub f0: usize,
    pub f_top: usize,
    pub volume: f64,
    /// Sorted indices of the extreme points.
    pub vertex_ids: Vec<usize>,
}

struct Plane {
    normal: Vec<f64>,
    offset: f64,
    members: Vec<usize>,
}

/// Exhaustive 3D hull. Returns `None` for degenerate (flat) input.
pub fn brute_force_hull_3d(points: &[Vec<f64>]) -> Option<OracleHull> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let scale = {
        let mut span: f64 = 0.0;
        for k in 0..3 {
            let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            span = span.max(hi - lo);
        }
        span
    };
    if scale <= 0.0 {
        return None;
    }
    let refs: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
    if linalg::affine_rank(&refs, 1e-9 * scale) < 3 {
        return None;
    }
    let on_tol = 1e-10 * scale;

    let mut planes: Vec<Plane> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some((mut normal, mut offset)) =
                    linalg::hyperplane_through(&[&points[i], &points[j], &points[k]], scale)
                else {
                    continue;
                };
                let mut above = false;
                let mut below = false;
                for p in points {
                    let d = linalg::dot(&normal, p) - offset;
                    if d > on_tol {
                        above = true;
                    } else if d < -on_tol {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    // flip so every point lies at or below the plane
                    normal.iter_mut().for_each(|x| *x = -*x);
                    offset = -offset;
                }
                let known = planes.iter().any(|pl| {
                    linalg::dist(&pl.normal, &normal) <= 1e-9
                        && (pl.offset - offset).abs() <= 1e-9 * scale
                });
                if !known {
                    let members: Vec<usize> = (0..n)
                        .filter(|&m| (linalg::dot(&normal, &points[m]) - offset).abs() <= on_tol)
                        .collect();
                    planes.push(Plane {
                        normal,
                        offset,
                        members,
                    });
                }
            }
        }
    }
    if planes.is_empty() {
        return None;
    }

    let vertex_ids: Vec<usize> = (0..n).filter(|&p| is_extreme(points, p, scale)).collect();

    let mut volume = 0.0;
    for plane in &planes {
        let poly_vertices: Vec<usize> = plane
            .members
            .iter()
            .copied()
            .filter(|&m| is_extreme_in_plane(points, &plane.members, m, scale))
            .collect();
        volume += plane.offset * polygon_area(points, &plane.normal, &poly_vertices) / 3.0;
    }

    Some(OracleHull {
        f0: vertex_ids.len(),
        f_top: planes.len(),
        volume,
        vertex_ids,
    })
}

/// Caratheodory test in R^3: interior iff inside a segment, triangle or
/// tetrahedron spanned by other points.
fn is_extreme(points: &[Vec<f64>], p: usize, scale: f64) -> bool {
    let n = points.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    for (ai, &a) in others.iter().enumerate() {
        if in_segment(&points[p], &points[a], scale, points, &others[ai + 1..]) {
            return false;
        }
    }
    for (ai, &a) in others.iter().enumerate() {
        for (bi, &b) in others.iter().enumerate().skip(ai + 1) {
            for &c in &others[bi + 1..] {
                if in_triangle(&points[p], &points[a], &points[b], &points[c], scale) {
                    return false;
                }
            }
        }
    }
    for (ai, &a) in others.iter().enumerate() {
        for (bi, &b) in others.iter().enumerate().skip(ai + 1) {
            for (ci, &c) in others.iter().enumerate().skip(bi + 1) {
                for &d in &others[ci + 1..] {
                    if in_tetrahedron(&points[p], &points[a], &points[b], &points[c], &points[d]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn in_segment(
    p: &[f64],
    a: &[f64],
    scale: f64,
    points: &[Vec<f64>],
    candidates: &[usize],
) -> bool {
    for &bidx in candidates {
        let b = &points[bidx];
        let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        let ap: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
        let len2 = linalg::dot(&ab, &ab);
        if len2 <= 0.0 {
            continue;
        }
        let t = linalg::dot(&ap, &ab) / len2;
        if !(-1e-9..=1.0 + 1e-9).contains(&t) {
            continue;
        }
        let dist2: f64 = ap
            .iter()
            .zip(&ab)
            .map(|(x, y)| x - t * y)
            .map(|x| x * x)
            .sum();
        if dist2.sqrt() <= 1e-9 * scale {
            return true;
        }
    }
    false
}

fn in_triangle(p: &[f64], a: &[f64], b: &[f64], c: &[f64], scale: f64) -> bool {
    let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let ac: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    let ap: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
    let cross = [
        ab[1] * ac[2] - ab[2] * ac[1],
        ab[2] * ac[0] - ab[0] * ac[2],
        ab[0] * ac[1] - ab[1] * ac[0],
    ];
    let cn = linalg::norm(&cross);
    if cn <= 1e-12 * scale * scale {
        return false; // degenerate triangle
    }
    if linalg::dot(&cross, &ap).abs() / cn > 1e-9 * scale {
        return false; // out of plane
    }
    let d00 = linalg::dot(&ab, &ab);
    let d01 = linalg::dot(&ab, &ac);
    let d11 = linalg::dot(&ac, &ac);
    let d20 = linalg::dot(&ap, &ab);
    let d21 = linalg::dot(&ap, &ac);
    let denom = d00 * d11 - d01 * d01;
    if denom <= 0.0 {
        return false;
    }
    let v = (d11 * d20 - d01 * d21) / denom;
    let w = (d00 * d21 - d01 * d20) / denom;
    let u = 1.0 - v - w;
    let eps = 1e-9;
    u >= -eps && v >= -eps && w >= -eps
}

fn in_tetrahedron(p: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> bool {
    let mut m = [0.0; 9];
    for (col, q) in [b, c, d].iter().enumerate() {
        for row in 0..3 {
            m[row * 3 + col] = q[row] - a[row];
        }
    }
    let mut rhs = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    if !linalg::solve_in_place(&mut m, &mut rhs, 3, 1e-13) {
        return false; // flat tetrahedron; lower-dimensional tests cover it
    }
    let eps = 1e-9;
    let s: f64 = rhs.iter().sum();
    rhs.iter().all(|&x| x >= -eps) && s <= 1.0 + eps
}

/// Within the facet plane: polygon vertex iff not in a segment or triangle of
/// the other coplanar members.
fn is_extreme_in_plane(points: &[Vec<f64>], members: &[usize], p: usize, scale: f64) -> bool {
    let others: Vec<usize> = members.iter().copied().filter(|&m| m != p).collect();
    for (ai, &a) in others.iter().enumerate() {
        if in_segment(&points[p], &points[a], scale, points, &others[ai + 1..]) {
            return false;
        }
    }
    for (ai, &a) in others.iter().enumerate() {
        for (bi, &b) in others.iter().enumerate().skip(ai + 1) {
            for &c in &others[bi + 1..] {
                if in_triangle(&points[p], &points[a], &points[b], &points[c], scale) {
                    return false;
                }
            }
        }
    }
    true
}

/// Area of the convex polygon with the given vertices (in convex position)
/// lying in the plane with unit normal `normal`.
fn polygon_area(points: &[Vec<f64>], normal: &[f64], vertex_ids: &[usize]) -> f64 {
    if vertex_ids.len() < 3 {
        return 0.0;
    }
    let basis = linalg::basis_orthogonal_to(normal);
    let centroid: Vec<f64> = {
        let mut c = vec![0.0; 3];
        for &v in vertex_ids {
            for k in 0..3 {
                c[k] += points[v][k];
            }
        }
        c.iter().map(|x| x / vertex_ids.len() as f64).collect()
    };
    let mut planar: Vec<(f64, f64)> = vertex_ids
        .iter()
        .map(|&v| {
            let rel: Vec<f64> = points[v].iter().zip(&centroid).map(|(a, b)| a - b).collect();
            (linalg::dot(&rel, &basis[0]), linalg::dot(&rel, &basis[1]))
        })
        .collect();
    planar.sort_by(|a, b| a.1.atan2(a.0).partial_cmp(&b.1.atan2(b.0)).unwrap());
    let mut area2 = 0.0;
    for i in 0..planar.len() {
        let (x1, y1) = planar[i];
        let (x2, y2) = planar[(i + 1) % planar.len()];
        area2 += x1 * y2 - x2 * y1;
    }
    area2.abs() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_on_the_cube() {
        let mut pts = Vec::new();
        for mask in 0..8u32 {
            pts.push(vec![
                (mask & 1) as f64,
                ((mask >> 1) & 1) as f64,
                ((mask >> 2) & 1) as f64,
            ]);
        }
        let h = brute_force_hull_3d(&pts).unwrap();
        assert_eq!(h.f0, 8);
        assert_eq!(h.f_top, 6);
        assert!((h.volume - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_excludes_interior_and_face_points() {
        let mut pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        pts.push(vec![0.2, 0.2, 0.2]); // interior
        pts.push(vec![0.3, 0.3, 0.0]); // inside the bottom facet
        let h = brute_force_hull_3d(&pts).unwrap();
        assert_eq!(h.vertex_ids, vec![0, 1, 2, 3]);
        assert_eq!(h.f_top, 4);
        assert!((h.volume - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_rejects_flat_input() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.4, 0.3, 0.0],
        ];
        assert!(brute_force_hull_3d(&pts).is_none());
    }
}
