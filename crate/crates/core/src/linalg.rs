//! Small dense linear algebra for dimensions up to about eight.
//!
//! The hull kernel, polytope validation and the substitution checks only ever
//! deal with n x n systems for n <= 6, so everything here works on row-major
//! slices and stays allocation-light instead of pulling in a matrix library.

/// Determinant via LU with partial pivoting. Consumes the buffer.
pub fn det_in_place(a: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut sign = 1.0;
    let mut det = 1.0;
    for col in 0..n {
        // pivot
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            sign = -sign;
        }
        let d = a[col * n + col];
        det *= d;
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f != 0.0 {
                for k in col + 1..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    sign * det
}

/// Solves `a x = b` in place (result left in `b`). Returns `false` when the
/// pivot falls below `pivot_tol`, i.e. the system is singular at that scale.
pub fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize, pivot_tol: f64) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best <= pivot_tol {
            return false;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f != 0.0 {
                for k in col + 1..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    true
}

/// Unit normal and offset of the hyperplane through `d` points in R^d,
/// computed from the generalized cross product of the edge vectors.
/// Orientation is arbitrary; `None` when the points are affinely degenerate
/// relative to `scale`.
pub fn hyperplane_through(points: &[&[f64]], scale: f64) -> Option<(Vec<f64>, f64)> {
    let d = points.len();
    debug_assert!(points.iter().all(|p| p.len() == d));
    let mut edges = vec![0.0; (d - 1) * d];
    for (i, p) in points.iter().enumerate().skip(1) {
        for k in 0..d {
            edges[(i - 1) * d + k] = p[k] - points[0][k];
        }
    }
    let mut normal = vec![0.0; d];
    let m = d - 1;
    let mut minor = vec![0.0; m * m];
    for j in 0..d {
        for r in 0..m {
            let mut cc = 0;
            for c in 0..d {
                if c == j {
                    continue;
                }
                minor[r * m + cc] = edges[r * d + c];
                cc += 1;
            }
        }
        let cof = det_in_place(&mut minor, m);
        normal[j] = if j % 2 == 0 { cof } else { -cof };
    }
    let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-14 * scale.powi(d as i32 - 1).max(f64::MIN_POSITIVE) {
        return None;
    }
    for x in &mut normal {
        *x /= norm;
    }
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// k-dimensional volume of the simplex with the given k+1 vertices embedded in
/// R^d (Gram determinant route, valid for any k <= d).
pub fn simplex_volume(vertices: &[&[f64]]) -> f64 {
    let k = vertices.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let mut gram = vec![0.0; k * k];
    let base = vertices[0];
    let d = base.len();
    let mut edges = vec![0.0; k * d];
    for i in 0..k {
        for c in 0..d {
            edges[i * d + c] = vertices[i + 1][c] - base[c];
        }
    }
    for i in 0..k {
        for j in i..k {
            let g = dot(&edges[i * d..(i + 1) * d], &edges[j * d..(j + 1) * d]);
            gram[i * k + j] = g;
            gram[j * k + i] = g;
        }
    }
    let g = det_in_place(&mut gram, k);
    let mut fact = 1.0;
    for i in 1..=k {
        fact *= i as f64;
    }
    g.max(0.0).sqrt() / fact
}

/// Affine dimension of a point set: rank of the edge-vector matrix with pivots
/// measured against `tol`.
pub fn affine_rank(points: &[&[f64]], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let d = points[0].len();
    let m = points.len() - 1;
    let mut rows = vec![0.0; m * d];
    for i in 0..m {
        for c in 0..d {
            rows[i * d + c] = points[i + 1][c] - points[0][c];
        }
    }
    row_rank(&mut rows, m, d, tol)
}

fn row_rank(rows: &mut [f64], m: usize, d: usize, tol: f64) -> usize {
    let mut rank = 0;
    let mut col = 0;
    while rank < m && col < d {
        let mut piv = rank;
        let mut best = rows[rank * d + col].abs();
        for r in rank + 1..m {
            let v = rows[r * d + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= tol {
            col += 1;
            continue;
        }
        if piv != rank {
            for k in 0..d {
                rows.swap(rank * d + k, piv * d + k);
            }
        }
        let p = rows[rank * d + col];
        for r in 0..m {
            if r == rank {
                continue;
            }
            let f = rows[r * d + col] / p;
            if f != 0.0 {
                for k in col..d {
                    rows[r * d + k] -= f * rows[rank * d + k];
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `u`,
/// built by Gram-Schmidt over the standard basis.
pub fn basis_orthogonal_to(u: &[f64]) -> Vec<Vec<f64>> {
    let d = u.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    for axis in 0..d {
        if basis.len() == d - 1 {
            break;
        }
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        let proj = dot(&v, u);
        for k in 0..d {
            v[k] -= proj * u[k];
        }
        for b in &basis {
            let proj = dot(&v, b);
            for k in 0..d {
                v[k] -= proj * b[k];
            }
        }
        let n = norm(&v);
        if n > 1e-8 {
            for x in &mut v {
                *x /= n;
            }
            basis.push(v);
        }
    }
    debug_assert_eq!(basis.len(), d - 1);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let mut a = [1.0, 2.0, 3.0, 4.0];
        assert!((det_in_place(&mut a, 2) - (-2.0)).abs() < 1e-12);
        let mut id = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        assert!((det_in_place(&mut id, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_roundtrip() {
        let a = [2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let x = [1.0, -2.0, 0.5];
        let mut b = [0.0; 3];
        for r in 0..3 {
            for c in 0..3 {
                b[r] += a[r * 3 + c] * x[c];
            }
        }
        let mut aw = a;
        assert!(solve_in_place(&mut aw, &mut b, 3, 1e-12));
        for i in 0..3 {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_through_triangle() {
        let p0 = [0.0, 0.0, 1.0];
        let p1 = [1.0, 0.0, 1.0];
        let p2 = [0.0, 1.0, 1.0];
        let (n, h) = hyperplane_through(&[&p0, &p1, &p2], 1.0).unwrap();
        assert!((n[2].abs() - 1.0).abs() < 1e-12);
        assert!((h * n[2].signum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_volumes() {
        // unit right triangle in the plane z=0, area 1/2
        let p0 = [0.0, 0.0, 0.0];
        let p1 = [1.0, 0.0, 0.0];
        let p2 = [0.0, 1.0, 0.0];
        assert!((simplex_volume(&[&p0, &p1, &p2]) - 0.5).abs() < 1e-12);
        // standard 3-simplex, volume 1/6
        let p3 = [0.0, 0.0, 1.0];
        assert!((simplex_volume(&[&p0, &p1, &p2, &p3]) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn rank_detects_flats() {
        let pts: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![2.0, 2.0, 0.0],
            vec![0.5, 0.5, 0.0],
        ];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert_eq!(affine_rank(&refs, 1e-9), 1);
    }

    #[test]
    fn orthogonal_basis_spans_complement() {
        let u = {
            let mut u = vec![1.0, 2.0, -1.0, 0.5];
            let n = norm(&u);
            u.iter_mut().for_each(|x| *x /= n);
            u
        };
        let basis = basis_orthogonal_to(&u);
        assert_eq!(basis.len(), 3);
        for (i, b) in basis.iter().enumerate() {
            assert!(dot(b, &u).abs() < 1e-12);
            assert!((norm(b) - 1.0).abs() < 1e-12);
            for other in &basis[i + 1..] {
                assert!(dot(b, other).abs() < 1e-12);
            }
        }
    }
}
