//! Incremental beneath-beyond construction of the simplicial hull.
//!
//! Points are flattened into one buffer; facets carry their outside
//! (conflict) sets and the furthest outside point is inserted first, so the
//! construction is the classical quickhull order. Visibility is decided by
//! plane distance against a diameter-relative epsilon; points coplanar with a
//! facet are treated as beneath it, which leaves coplanar inputs stitched
//! into sliver simplices on the shared support plane. The merge pass in
//! `mod.rs` collapses those into one geometric facet.

use crate::linalg;
use crate::HullError;

pub(super) struct Simplicial {
    pub dim: usize,
    pub scale: f64,
    pub facets: Vec<Facet>,
}

pub(super) struct Facet {
    pub verts: Vec<u32>,
    pub normal: Vec<f64>,
    pub offset: f64,
    /// neighbors[k] shares the ridge opposite verts[k]
    pub neighbors: Vec<u32>,
    pub alive: bool,
    outside: Vec<u32>,
    furthest: u32,
    furthest_dist: f64,
}

struct Ctx<'a> {
    pts: &'a [f64],
    dim: usize,
    scale: f64,
    eps_vis: f64,
}

impl<'a> Ctx<'a> {
    fn coords(&self, i: u32) -> &'a [f64] {
        let i = i as usize;
        &self.pts[i * self.dim..(i + 1) * self.dim]
    }

    fn signed_dist(&self, f: &Facet, p: u32) -> f64 {
        linalg::dot(&f.normal, self.coords(p)) - f.offset
    }
}

pub(super) fn build(points: &[Vec<f64>], dim: usize) -> Result<Simplicial, HullError> {
    if points.len() < dim + 1 {
        return Err(HullError::TooFewPoints {
            needed: dim + 1,
            got: points.len(),
        });
    }
    let n_pts = points.len();
    let mut flat = vec![0.0; n_pts * dim];
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(HullError::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        flat[i * dim..(i + 1) * dim].copy_from_slice(p);
    }
    let scale = extent(&flat, n_pts, dim);
    if scale <= 0.0 {
        return Err(HullError::Degenerate);
    }
    let ctx = Ctx {
        pts: &flat,
        dim,
        scale,
        eps_vis: 1e-10 * scale,
    };

    let seed = initial_simplex(&ctx, n_pts)?;
    let mut interior = vec![0.0; dim];
    for &v in &seed {
        for k in 0..dim {
            interior[k] += ctx.coords(v)[k];
        }
    }
    for x in &mut interior {
        *x /= (dim + 1) as f64;
    }

    let mut facets: Vec<Facet> = Vec::new();
    // facet i of the seed omits seed[i]; its neighbor opposite seed[j] is facet j
    for omit in 0..=dim {
        let verts: Vec<u32> = (0..=dim).filter(|&k| k != omit).map(|k| seed[k]).collect();
        let (normal, offset) = facet_plane(&ctx, &verts, &interior)?;
        let neighbors: Vec<u32> = (0..=dim)
            .filter(|&k| k != omit)
            .map(|k| k as u32)
            .collect();
        facets.push(Facet {
            verts,
            normal,
            offset,
            neighbors,
            alive: true,
            outside: Vec::new(),
            furthest: 0,
            furthest_dist: 0.0,
        });
    }

    let mut pending: Vec<u32> = Vec::new();
    let initial_range = 0..facets.len();
    for p in 0..n_pts as u32 {
        if seed.contains(&p) {
            continue;
        }
        assign_point(&ctx, &mut facets, initial_range.clone(), p, &mut pending);
    }

    let mut visible: Vec<u32> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    let mut horizon: Vec<(u32, usize)> = Vec::new();
    let mut ridge_map: std::collections::HashMap<Vec<u32>, (u32, usize)> =
        std::collections::HashMap::new();

    while let Some(fid) = pending.pop() {
        let f = &facets[fid as usize];
        if !f.alive || f.outside.is_empty() {
            continue;
        }
        let apex = f.furthest;

        // flood the region visible from the apex
        visible.clear();
        horizon.clear();
        stack.clear();
        stack.push(fid);
        facets[fid as usize].alive = false;
        visible.push(fid);
        while let Some(v) = stack.pop() {
            for slot in 0..dim {
                let nb = facets[v as usize].neighbors[slot];
                let nf = &facets[nb as usize];
                if !nf.alive {
                    continue;
                }
                if ctx.signed_dist(nf, apex) > ctx.eps_vis {
                    facets[nb as usize].alive = false;
                    visible.push(nb);
                    stack.push(nb);
                } else {
                    horizon.push((v, slot));
                }
            }
        }

        // cone of new facets over the horizon ridges
        ridge_map.clear();
        let first_new = facets.len() as u32;
        for &(vf, slot) in &horizon {
            let (ridge, beyond) = {
                let old = &facets[vf as usize];
                let ridge: Vec<u32> = (0..dim)
                    .filter(|&k| k != slot)
                    .map(|k| old.verts[k])
                    .collect();
                (ridge, old.neighbors[slot])
            };
            let mut verts = ridge.clone();
            verts.push(apex);
            let (normal, offset) = facet_plane(&ctx, &verts, &interior)?;
            let new_id = facets.len() as u32;
            let mut neighbors = vec![u32::MAX; dim];
            neighbors[dim - 1] = beyond;
            // repoint the surviving neighbor across the horizon ridge
            let across = &mut facets[beyond as usize];
            let back = across
                .neighbors
                .iter()
                .position(|&x| x == vf)
                .ok_or(HullError::Internal("horizon neighbor link missing"))?;
            across.neighbors[back] = new_id;
            facets.push(Facet {
                verts,
                normal,
                offset,
                neighbors,
                alive: true,
                outside: Vec::new(),
                furthest: 0,
                furthest_dist: 0.0,
            });
            // glue new facets to each other along the ridges through the apex
            let nf = facets.len() - 1;
            for k in 0..dim - 1 {
                let mut key: Vec<u32> = facets[nf]
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &v)| v)
                    .collect();
                key.sort_unstable();
                match ridge_map.remove(&key) {
                    Some((other, oslot)) => {
                        facets[nf].neighbors[k] = other;
                        facets[other as usize].neighbors[oslot] = new_id;
                    }
                    None => {
                        ridge_map.insert(key, (new_id, k));
                    }
                }
            }
        }
        if !ridge_map.is_empty() {
            return Err(HullError::Internal("unmatched ridge in cone"));
        }

        // repartition the outside sets of the dead region
        let new_range = first_new as usize..facets.len();
        let mut orphans: Vec<u32> = Vec::new();
        for &v in &visible {
            orphans.append(&mut facets[v as usize].outside);
        }
        for q in orphans {
            if q == apex {
                continue;
            }
            assign_point(&ctx, &mut facets, new_range.clone(), q, &mut pending);
        }
    }

    Ok(Simplicial { dim, scale, facets })
}

fn assign_point(
    ctx: &Ctx,
    facets: &mut [Facet],
    range: std::ops::Range<usize>,
    p: u32,
    pending: &mut Vec<u32>,
) {
    for fi in range {
        let f = &mut facets[fi];
        if !f.alive {
            continue;
        }
        let d = linalg::dot(&f.normal, ctx.coords(p)) - f.offset;
        if d > ctx.eps_vis {
            if f.outside.is_empty() {
                pending.push(fi as u32);
            }
            f.outside.push(p);
            if d > f.furthest_dist || (d == f.furthest_dist && p < f.furthest) {
                f.furthest_dist = d;
                f.furthest = p;
            }
            return;
        }
    }
}

fn facet_plane(ctx: &Ctx, verts: &[u32], interior: &[f64]) -> Result<(Vec<f64>, f64), HullError> {
    let refs: Vec<&[f64]> = verts.iter().map(|&v| ctx.coords(v)).collect();
    let (mut normal, mut offset) = linalg::hyperplane_through(&refs, ctx.scale)
        .ok_or(HullError::Internal("degenerate facet plane"))?;
    if linalg::dot(&normal, interior) - offset > 0.0 {
        for x in &mut normal {
            *x = -*x;
        }
        offset = -offset;
    }
    Ok((normal, offset))
}

/// Greedy max-volume seed simplex: start from the lexicographically smallest
/// point and repeatedly take the point farthest from the affine hull so far.
fn initial_simplex(ctx: &Ctx, n_pts: usize) -> Result<Vec<u32>, HullError> {
    let dim = ctx.dim;
    let mut first = 0u32;
    for p in 1..n_pts as u32 {
        if ctx.coords(p) < ctx.coords(first) {
            first = p;
        }
    }
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() <= dim {
        let origin = ctx.coords(chosen[0]);
        let mut best: Option<(f64, u32, Vec<f64>)> = None;
        for p in 0..n_pts as u32 {
            if chosen.contains(&p) {
                continue;
            }
            let mut r: Vec<f64> = ctx
                .coords(p)
                .iter()
                .zip(origin)
                .map(|(a, b)| a - b)
                .collect();
            for b in &basis {
                let proj = linalg::dot(&r, b);
                for k in 0..dim {
                    r[k] -= proj * b[k];
                }
            }
            let d = linalg::norm(&r);
            let better = match &best {
                None => true,
                Some((bd, bp, _)) => d > *bd || (d == *bd && p < *bp),
            };
            if better {
                best = Some((d, p, r));
            }
        }
        let (d, p, mut r) = best.ok_or(HullError::Degenerate)?;
        if d <= 1e-9 * ctx.scale {
            return Err(HullError::Degenerate);
        }
        for x in &mut r {
            *x /= d;
        }
        basis.push(r);
        chosen.push(p);
    }
    Ok(chosen)
}

fn extent(flat: &[f64], n_pts: usize, dim: usize) -> f64 {
    let mut span: f64 = 0.0;
    for k in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n_pts {
            let v = flat[i * dim + k];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        span = span.max(hi - lo);
    }
    span
}
