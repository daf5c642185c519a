//! Uniform sampling on the boundary of a simple polytope.
//!
//! Each point is drawn facet-first (probability proportional to facet area),
//! then a triangulation simplex (probability proportional to its measure),
//! then a uniform point in that simplex via sorted-uniform spacings. Batches
//! are bit-reproducible given (seed, stream, polytope, N); replications own
//! independent ChaCha streams so parallel schedules cannot change results.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polytope::{Point, SimplePolytope};

/// A sampled boundary point with its provenance.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub coords: Point,
    pub facet_id: usize,
    /// Index into the facet's triangulation.
    pub simplex_id: usize,
}

#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub points: Vec<BoundaryPoint>,
    pub seed: u64,
    pub stream: u64,
    pub polytope_id: String,
}

impl SampleBatch {
    pub fn coords(&self) -> Vec<Point> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }
}

/// Counter-based generator for replication `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n_points` i.i.d. points uniformly (w.r.t. surface measure) on the
/// boundary of `poly`, on stream 0 of `seed`.
pub fn sample_boundary(poly: &SimplePolytope, n_points: usize, seed: u64) -> SampleBatch {
    sample_boundary_stream(poly, n_points, seed, 0)
}

/// Same as [`sample_boundary`] but on an explicit replication stream.
pub fn sample_boundary_stream(
    poly: &SimplePolytope,
    n_points: usize,
    seed: u64,
    stream: u64,
) -> SampleBatch {
    assert!(n_points >= 1, "need at least one point");
    let mut rng = stream_rng(seed, stream);
    let tables = SamplerTables::new(poly);
    let mut points = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        points.push(tables.draw(poly, &mut rng));
    }
    SampleBatch {
        points,
        seed,
        stream,
        polytope_id: poly.id().to_string(),
    }
}

struct SamplerTables {
    /// Cumulative facet areas, normalized to end at 1.
    facet_cdf: Vec<f64>,
    /// Per facet: cumulative simplex measures, normalized to end at 1.
    simplex_cdf: Vec<Vec<f64>>,
}

impl SamplerTables {
    fn new(poly: &SimplePolytope) -> Self {
        let total = poly.surface_area();
        let mut acc = 0.0;
        let mut facet_cdf = Vec::with_capacity(poly.facets().len());
        let mut simplex_cdf = Vec::with_capacity(poly.facets().len());
        for f in poly.facets() {
            acc += f.area / total;
            facet_cdf.push(acc);
            let mut cdf = Vec::with_capacity(f.triangulation.len());
            let mut sacc = 0.0;
            for simplex in &f.triangulation {
                let refs: Vec<&[f64]> =
                    simplex.iter().map(|&v| poly.vertices()[v].as_slice()).collect();
                sacc += crate::linalg::simplex_volume(&refs) / f.area;
                cdf.push(sacc);
            }
            if let Some(last) = cdf.last_mut() {
                *last = 1.0;
            }
            simplex_cdf.push(cdf);
        }
        if let Some(last) = facet_cdf.last_mut() {
            *last = 1.0;
        }
        SamplerTables {
            facet_cdf,
            simplex_cdf,
        }
    }

    fn draw(&self, poly: &SimplePolytope, rng: &mut ChaCha8Rng) -> BoundaryPoint {
        let u: f64 = rng.gen();
        let facet_id = self.facet_cdf.partition_point(|&c| c <= u);
        let facet_id = facet_id.min(self.facet_cdf.len() - 1);
        let v: f64 = rng.gen();
        let cdf = &self.simplex_cdf[facet_id];
        let simplex_id = cdf.partition_point(|&c| c <= v).min(cdf.len() - 1);
        let simplex = &poly.facets()[facet_id].triangulation[simplex_id];
        let n = poly.dimension();
        // sorted-uniform spacings give a uniform point of the (n-1)-simplex
        let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut coords = vec![0.0; n];
        let mut prev = 0.0;
        for (k, &vid) in simplex.iter().enumerate() {
            let next = if k + 1 < simplex.len() { cuts[k] } else { 1.0 };
            let w = next - prev;
            prev = next;
            for (c, x) in coords.iter_mut().zip(&poly.vertices()[vid]) {
                *c += w * x;
            }
        }
        BoundaryPoint {
            coords,
            facet_id,
            simplex_id,
        }
    }
}

/// Per-facet sample counts plus the occupancy flag: true when every facet
/// received more than N * (|F_i| / |bd P|) / (4 ln N) points.
pub fn facet_occupancy_check(
    batch: &SampleBatch,
    poly: &SimplePolytope,
) -> (BTreeMap<usize, u64>, bool) {
    let n_points = batch.points.len() as f64;
    assert!(batch.points.len() >= 3, "occupancy check needs N >= 3");
    let mut counts: BTreeMap<usize, u64> = (0..poly.facets().len()).map(|f| (f, 0)).collect();
    for p in &batch.points {
        *counts.get_mut(&p.facet_id).expect("facet id in range") += 1;
    }
    let log_n = n_points.ln();
    let ok = poly.facets().iter().enumerate().all(|(fid, f)| {
        let share = f.area / poly.surface_area();
        counts[&fid] as f64 > n_points * share / (4.0 * log_n)
    });
    (counts, ok)
}

/// Dumps a batch as CSV with columns seed, index, facet_id, x_1..x_n.
pub fn write_batch_csv<W: Write>(batch: &SampleBatch, mut out: W) -> std::io::Result<()> {
    let dim = batch.points.first().map(|p| p.coords.len()).unwrap_or(0);
    write!(out, "seed,index,facet_id")?;
    for k in 1..=dim {
        write!(out, ",x_{k}")?;
    }
    writeln!(out)?;
    for (i, p) in batch.points.iter().enumerate() {
        write!(out, "{},{},{}", batch.seed, i, p.facet_id)?;
        for c in &p.coords {
            write!(out, ",{}", crate::harness::fmt_f64(*c))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::polytope::make_cube;

    #[test]
    fn points_lie_on_their_facet_planes() {
        let cube = make_cube(3).unwrap();
        let batch = sample_boundary(&cube, 500, 7);
        assert_eq!(batch.points.len(), 500);
        for p in &batch.points {
            let f = &cube.facets()[p.facet_id];
            let d = linalg::dot(&f.support.normal, &p.coords) - f.support.offset;
            assert!(d.abs() <= 1e-9, "off-plane by {d}");
            assert!(p.coords.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let cube = make_cube(3).unwrap();
        let a = sample_boundary(&cube, 200, 99);
        let b = sample_boundary(&cube, 200, 99);
        for (p, q) in a.points.iter().zip(&b.points) {
            assert_eq!(p.coords, q.coords);
            assert_eq!(p.facet_id, q.facet_id);
            assert_eq!(p.simplex_id, q.simplex_id);
        }
        let c = sample_boundary_stream(&cube, 200, 99, 1);
        assert!(a.points.iter().zip(&c.points).any(|(p, q)| p.coords != q.coords));
    }

    #[test]
    fn single_point_batch() {
        let cube = make_cube(4).unwrap();
        let batch = sample_boundary(&cube, 1, 3);
        assert_eq!(batch.points.len(), 1);
    }

    #[test]
    fn occupancy_small_n_evaluates() {
        let cube = make_cube(3).unwrap();
        let batch = sample_boundary(&cube, 3, 1);
        let (counts, _flag) = facet_occupancy_check(&batch, &cube);
        assert_eq!(counts.values().sum::<u64>(), 3);
    }

    #[test]
    fn occupancy_rejects_single_facet_batch() {
        let cube = make_cube(3).unwrap();
        let mut batch = sample_boundary(&cube, 100, 5);
        for p in &mut batch.points {
            p.facet_id = 0; // adversarial: pretend everything landed on facet 0
        }
        let (_counts, flag) = facet_occupancy_check(&batch, &cube);
        assert!(!flag);
    }

    #[test]
    fn barycentric_weights_cover_the_simplex() {
        // with many draws the minimum coordinate on a fixed facet should get
        // close to the facet boundary, i.e. spacings are not clumped
        let cube = make_cube(2).unwrap();
        let batch = sample_boundary(&cube, 2000, 11);
        let mut lo: f64 = 1.0;
        let mut hi: f64 = 0.0;
        for p in &batch.points {
            if p.facet_id == 0 {
                lo = lo.min(p.coords[1]);
                hi = hi.max(p.coords[1]);
            }
        }
        assert!(lo < 0.01 && hi > 0.99);
    }
}
