//! Machine-readable run reports: a records CSV, a JSON summary with per-N
//! means, standard errors and default fits, and a manifest with content
//! hashes. Output is byte-stable given identical inputs.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    aggregate, columns, fit_log_power, fit_power_law, fmt_f64, ExperimentPlan, FitResult,
    PolytopeRef, RunTable,
};
use crate::polytope::{self, SimplePolytope};
use crate::PlanError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSummary {
    #[serde(rename = "N")]
    pub n_points: u64,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub plan: ExperimentPlan,
    pub polytope_id: String,
    pub master_seed: u64,
    /// Record streams, in record order.
    pub seeds: Vec<u64>,
    pub per_metric: BTreeMap<String, Vec<MetricSummary>>,
    pub fits: BTreeMap<String, FitResult>,
    pub failures: Vec<String>,
}

pub fn load_plan(path: &Path) -> Result<ExperimentPlan, PlanError> {
    let text = std::fs::read_to_string(path).map_err(|source| PlanError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let plan: ExperimentPlan = serde_json::from_str(&text).map_err(|source| PlanError::Json {
        path: path.display().to_string(),
        source,
    })?;
    plan.validate()?;
    Ok(plan)
}

pub fn resolve_polytope(reference: &PolytopeRef) -> Result<SimplePolytope, PlanError> {
    match reference {
        PolytopeRef::Builtin(name) => match polytope::builtin(name) {
            Some(result) => Ok(result?),
            None => {
                // a bare string may also be a file path
                if Path::new(name).exists() {
                    load_polytope_file(Path::new(name))
                } else {
                    Err(PlanError::UnknownPolytope(name.clone()))
                }
            }
        },
        PolytopeRef::File { path } => load_polytope_file(Path::new(path)),
    }
}

pub fn load_polytope_file(path: &Path) -> Result<SimplePolytope, PlanError> {
    let text = std::fs::read_to_string(path).map_err(|source| PlanError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let json: polytope::PolytopeJson =
        serde_json::from_str(&text).map_err(|source| PlanError::Json {
            path: path.display().to_string(),
            source,
        })?;
    Ok(polytope::from_json(&json)?)
}

/// Default fits for the standard metric columns: log-log power laws for the
/// volume metrics, log-power (p = n-2) for the count metrics.
pub fn default_fits(
    table: &RunTable,
    dimension: usize,
) -> BTreeMap<String, FitResult> {
    let mut fits = BTreeMap::new();
    let p = (dimension as u32).saturating_sub(2).max(1);
    for col in columns(table) {
        let points = aggregate(table, &col);
        if points.len() < 4 {
            continue;
        }
        let fit = match col.as_str() {
            "vol_diff" | "v_cn" | "v_dn" => fit_power_law(&points).ok(),
            "f0" | "f_top_proper" | "f_top_total" => fit_log_power(&points, p).ok(),
            _ => None,
        };
        if let Some(fit) = fit {
            fits.insert(col, fit);
        }
    }
    fits
}

pub fn build_summary(
    plan: &ExperimentPlan,
    table: &RunTable,
    fits: BTreeMap<String, FitResult>,
) -> RunSummary {
    let mut per_metric = BTreeMap::new();
    for col in columns(table) {
        let points = aggregate(table, &col)
            .into_iter()
            .map(|(n_points, mean, stderr)| MetricSummary {
                n_points,
                mean,
                stderr,
            })
            .collect();
        per_metric.insert(col, points);
    }
    RunSummary {
        plan: plan.clone(),
        polytope_id: table.polytope_id.clone(),
        master_seed: table.master_seed,
        seeds: table.records.iter().map(|r| r.stream).collect(),
        per_metric,
        fits,
        failures: table.failures.clone(),
    }
}

/// Serializes the records as CSV with columns N, replication, metric, value.
pub fn records_csv(table: &RunTable) -> String {
    let mut out = String::from("N,replication,metric,value\n");
    for rec in &table.records {
        for (metric, value) in &rec.values {
            out.push_str(&format!(
                "{},{},{},{}\n",
                rec.n_points,
                rec.replication,
                metric,
                fmt_f64(*value)
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub sha256: String,
}

fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes records.csv, summary.json and manifest.json into `out_dir`.
pub fn write_run_directory(
    out_dir: &Path,
    plan: &ExperimentPlan,
    table: &RunTable,
    fits: BTreeMap<String, FitResult>,
) -> Result<PathBuf, PlanError> {
    std::fs::create_dir_all(out_dir).map_err(|source| PlanError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let csv = records_csv(table);
    let summary = build_summary(plan, table, fits);
    let summary_json =
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    let mut manifest = Manifest { files: Vec::new() };
    for (name, data) in [("records.csv", csv.as_str()), ("summary.json", summary_json.as_str())] {
        let path = out_dir.join(name);
        write_file(&path, data.as_bytes())?;
        manifest.files.push(ManifestEntry {
            name: name.to_string(),
            sha256: sha256_hex(data.as_bytes()),
        });
    }
    let manifest_json =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    let manifest_path = out_dir.join("manifest.json");
    write_file(&manifest_path, manifest_json.as_bytes())?;
    Ok(out_dir.to_path_buf())
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), PlanError> {
    let mut f = std::fs::File::create(path).map_err(|source| PlanError::Io {
        path: path.display().to_string(),
        source,
    })?;
    f.write_all(data).map_err(|source| PlanError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_summary(path: &Path) -> Result<RunSummary, PlanError> {
    let text = std::fs::read_to_string(path).map_err(|source| PlanError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| PlanError::Json {
        path: path.display().to_string(),
        source,
    })
}
