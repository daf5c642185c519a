//! Experiment orchestration: N-grids with replications, per-record metrics,
//! scaling fits, and reproducible parallel execution.
//!
//! Every (N, replication) cell owns a dedicated RNG stream derived from the
//! master seed and the record index, and records are collected into
//! pre-assigned slots, so the output is byte-identical for any thread count.

mod fit;
pub mod report;

pub use fit::{fit_log_power, fit_power_law, preferred_log_power, FitModel, FitResult, GridPoint};

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hull;
use crate::polytope::SimplePolytope;
use crate::sampler;
use crate::PlanError;

/// Full-precision float formatting: 17 significant digits, diffable output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeRef {
    /// Builtin name: cube-N, simplex-N, prism-N.
    Builtin(String),
    /// Path to a polytope JSON file.
    File { path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    F0,
    FTopProper,
    FTopTotal,
    VolDiff,
    #[serde(alias = "V_CN")]
    VCn,
    #[serde(alias = "V_DN")]
    VDn,
    CrossFacetHistogram,
}

impl Metric {
    pub fn all() -> Vec<Metric> {
        vec![
            Metric::F0,
            Metric::FTopProper,
            Metric::FTopTotal,
            Metric::VolDiff,
            Metric::VCn,
            Metric::VDn,
            Metric::CrossFacetHistogram,
        ]
    }

    pub fn key(&self) -> &'static str {
        match self {
            Metric::F0 => "f0",
            Metric::FTopProper => "f_top_proper",
            Metric::FTopTotal => "f_top_total",
            Metric::VolDiff => "vol_diff",
            Metric::VCn => "v_cn",
            Metric::VDn => "v_dn",
            Metric::CrossFacetHistogram => "cross_facet_histogram",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub polytope: PolytopeRef,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<u64>,
    pub replications: u64,
    pub master_seed: u64,
    pub metrics: Vec<Metric>,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<(), PlanError> {
        if self.n_grid.is_empty() {
            return Err(PlanError::Invalid("N_grid must be nonempty".into()));
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(PlanError::Invalid("N_grid must be strictly increasing".into()));
        }
        if self.replications < 2 {
            return Err(PlanError::Invalid("need at least 2 replications".into()));
        }
        if self.metrics.is_empty() {
            return Err(PlanError::Invalid("metrics must be nonempty".into()));
        }
        Ok(())
    }
}

/// One (N, replication) measurement: flat metric values keyed by column name
/// (the cross-facet histogram expands to cross_facet_<k> columns).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Record {
    #[serde(rename = "N")]
    pub n_points: u64,
    pub replication: u64,
    pub stream: u64,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunTable {
    pub polytope_id: String,
    pub master_seed: u64,
    pub records: Vec<Record>,
    /// Hull failures, recorded and excluded; must stay empty in healthy runs.
    pub failures: Vec<String>,
}

/// Runs the plan against an already-resolved polytope. Replications fan out
/// over the rayon pool; each record draws from stream = record index.
pub fn run_plan(plan: &ExperimentPlan, poly: &SimplePolytope) -> Result<RunTable, PlanError> {
    plan.validate()?;
    let min_n = 4 * poly.dimension() as u64;
    if let Some(&n) = plan.n_grid.iter().find(|&&n| n < min_n) {
        return Err(PlanError::Invalid(format!(
            "N = {n} below the small-N cutoff 4n = {min_n}"
        )));
    }
    let cells: Vec<(usize, u64, u64)> = plan
        .n_grid
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| (0..plan.replications).map(move |r| (i, n, r)))
        .collect();
    let results: Vec<Result<Record, String>> = cells
        .par_iter()
        .map(|&(i, n, r)| {
            let stream = (i as u64) * plan.replications + r;
            measure_once(poly, n, plan.master_seed, stream, r, &plan.metrics)
        })
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for res in results {
        match res {
            Ok(rec) => records.push(rec),
            Err(msg) => failures.push(msg),
        }
    }
    Ok(RunTable {
        polytope_id: poly.id().to_string(),
        master_seed: plan.master_seed,
        records,
        failures,
    })
}

fn measure_once(
    poly: &SimplePolytope,
    n: u64,
    master_seed: u64,
    stream: u64,
    replication: u64,
    metrics: &[Metric],
) -> Result<Record, String> {
    let batch = sampler::sample_boundary_stream(poly, n as usize, master_seed, stream);
    let coords = batch.coords();
    let mesh = hull::convex_hull(&coords)
        .map_err(|e| format!("N={n} replication={replication}: hull failed: {e}"))?;
    let wants_classification = metrics.iter().any(|m| {
        matches!(
            m,
            Metric::FTopProper | Metric::VCn | Metric::VDn | Metric::CrossFacetHistogram
        )
    });
    let mut values: BTreeMap<String, f64> = BTreeMap::new();
    let vol_diff = poly.volume() - mesh.volume;
    // cheap sanity invariants; violations indicate kernel bugs
    if vol_diff < -1e-9 * poly.volume().max(1.0) || mesh.f0 > n as usize {
        return Err(format!(
            "N={n} replication={replication}: invariant violation (vol_diff={vol_diff}, f0={})",
            mesh.f0
        ));
    }
    for metric in metrics {
        match metric {
            Metric::F0 => {
                values.insert("f0".into(), mesh.f0 as f64);
            }
            Metric::FTopTotal => {
                values.insert("f_top_total".into(), mesh.f_top as f64);
            }
            Metric::VolDiff => {
                values.insert("vol_diff".into(), vol_diff);
            }
            _ => {}
        }
    }
    if wants_classification {
        let classification = hull::classify_facets(&mesh, &batch, poly)
            .map_err(|e| format!("N={n} replication={replication}: classify failed: {e}"))?;
        let boundary_count = classification.boundary_coincident_count();
        if boundary_count > poly.facets().len() {
            return Err(format!(
                "N={n} replication={replication}: {boundary_count} boundary-coincident facets \
                 exceed the {} facets of the polytope",
                poly.facets().len()
            ));
        }
        if metrics.contains(&Metric::FTopProper) {
            values.insert("f_top_proper".into(), classification.proper_count() as f64);
        }
        if metrics.contains(&Metric::CrossFacetHistogram) {
            for (&touched, &count) in &classification.touched_histogram {
                values.insert(format!("cross_facet_{touched}"), count as f64);
            }
        }
        if metrics.iter().any(|m| matches!(m, Metric::VCn | Metric::VDn)) {
            let (v_cn, v_dn) = hull::volume_decomposition(&mesh, &classification, poly)
                .map_err(|e| format!("N={n} replication={replication}: decomposition failed: {e}"))?;
            if metrics.contains(&Metric::VCn) {
                values.insert("v_cn".into(), v_cn);
            }
            if metrics.contains(&Metric::VDn) {
                values.insert("v_dn".into(), v_dn);
            }
        }
    }
    Ok(Record {
        n_points: n,
        replication,
        stream,
        values,
    })
}

/// Per-N mean and standard error for one metric column.
pub fn aggregate(table: &RunTable, column: &str) -> Vec<GridPoint> {
    let mut by_n: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for rec in &table.records {
        // histogram columns are absent from records where the count is zero
        let v = rec.values.get(column).copied().unwrap_or_else(|| {
            if column.starts_with("cross_facet_") {
                0.0
            } else {
                f64::NAN
            }
        });
        by_n.entry(rec.n_points).or_default().push(v);
    }
    by_n
        .into_iter()
        .filter(|(_, vs)| vs.iter().all(|v| v.is_finite()))
        .map(|(n, vs)| {
            (
                n,
                crate::stats::mean(&vs),
                crate::stats::stderr_of_mean(&vs),
            )
        })
        .collect()
}

/// Metric columns present in a run table, sorted.
pub fn columns(table: &RunTable) -> Vec<String> {
    let mut cols: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for rec in &table.records {
        cols.extend(rec.values.keys().cloned());
    }
    cols.into_iter().collect()
}

/// Outcome of the corner-miss demonstration on the cube.
#[derive(Debug, Clone, Serialize)]
pub struct CornerMissResult {
    pub measured: f64,
    /// Exact Bernoulli value (1 - 1/N)^N.
    pub predicted: f64,
    /// Simplex scale factor used in the construction.
    pub scale: f64,
    /// Binomial standard deviation of the measured fraction.
    pub sigma: f64,
}

/// Fraction of replications in which no boundary sample hits the union of
/// the n corner simplices of total normalized boundary measure 1/N.
pub fn corner_miss(
    dim: usize,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<CornerMissResult, PlanError> {
    if dim < 2 {
        return Err(PlanError::Invalid("corner-miss needs dimension >= 2".into()));
    }
    if reps == 0 {
        return Err(PlanError::Invalid("corner-miss needs at least one replication".into()));
    }
    if n == 1 {
        // the union has full boundary mass, so the single point always hits
        return Ok(CornerMissResult {
            measured: 0.0,
            predicted: 0.0,
            scale: 1.0,
            sigma: 0.0,
        });
    }
    let factorial: f64 = (1..dim as u64).map(|k| k as f64).product();
    // ((n-1)! * |bd C^n| / (n N))^{1/(n-1)} with |bd C^n| = 2n
    let scale = (factorial * 2.0 * dim as f64 / (dim as f64 * n as f64))
        .powf(1.0 / (dim as f64 - 1.0));
    if scale >= 1.0 {
        return Err(PlanError::Invalid(format!(
            "corner simplices with scale {scale:.4} do not fit inside the facets; increase N"
        )));
    }
    let misses: u64 = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = sampler::stream_rng(seed, r);
            let mut hit = false;
            for _ in 0..n {
                // facets of the unit cube have equal area; even indices are
                // the n facets adjacent to the origin
                let facet: usize = rng.gen_range(0..2 * dim);
                if facet % 2 == 1 {
                    continue;
                }
                let mut sum = 0.0;
                for _ in 0..dim - 1 {
                    sum += rng.gen::<f64>();
                }
                if sum <= scale {
                    hit = true;
                    break;
                }
            }
            u64::from(!hit)
        })
        .sum();
    let measured = misses as f64 / reps as f64;
    let predicted = (1.0 - 1.0 / n as f64).powi(n as i32);
    let sigma = (predicted * (1.0 - predicted) / reps as f64).sqrt().max(1e-12);
    Ok(CornerMissResult {
        measured,
        predicted,
        scale,
        sigma,
    })
}

/// Fraction of replications whose batch passes the facet-occupancy bound.
pub fn occupancy_demo(poly: &SimplePolytope, n: u64, reps: u64, seed: u64) -> f64 {
    let passes: u64 = (0..reps)
        .into_par_iter()
        .map(|r| {
            let batch = sampler::sample_boundary_stream(poly, n as usize, seed, r);
            let (_, ok) = sampler::facet_occupancy_check(&batch, poly);
            u64::from(ok)
        })
        .sum();
    passes as f64 / reps as f64
}
