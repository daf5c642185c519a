//! Batch frontend: polytope generation, simulation runs, scaling fits,
//! integral evaluation and the built-in check suites.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::RngCore;

use hullaw_core::asymptotics::{
    j_asymptotic, j_direct, j_log_regime, j_transformed, s_eval, s_eval_symmetrized,
    ExponentVector, JEvalResult,
};
use hullaw_core::harness::{
    self, corner_miss, fit_log_power, fit_power_law, fmt_f64, occupancy_demo, preferred_log_power,
    report,
};
use hullaw_core::{polytope, verify};

#[derive(Parser)]
#[command(
    name = "hullaw",
    about = "Random polytopes from boundary samples: simulation, scaling fits and integral checks",
    version
)]
struct Cli {
    /// Worker threads (default: HULLAW_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a validated polytope JSON (builtin name or vertex file).
    Gen(GenArgs),
    /// Run an experiment plan and write a run directory.
    Simulate(SimulateArgs),
    /// Fit a scaling law to an existing run directory.
    Fit(FitArgs),
    /// Evaluate the box integral J by one or more methods.
    Jeval(JevalArgs),
    /// Evaluate the ordered-region integral S over an N-grid.
    Seval(SevalArgs),
    /// Run a built-in check suite (geometry, hull-oracle, substitution, asymptotics, all).
    Verify(VerifyArgs),
    /// Demonstrations: corner-miss and occupancy.
    Demo(DemoArgs),
}

#[derive(Args)]
struct GenArgs {
    /// cube-N, simplex-N, prism-N, or a path to a JSON vertex list / polytope file.
    name: String,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Plan file: {"polytope", "N_grid", "replications", "master_seed", "metrics"}.
    #[arg(long)]
    plan: PathBuf,
    /// Run directory to create.
    #[arg(long)]
    out: PathBuf,
    /// Also dump each batch as CSV (large!).
    #[arg(long)]
    dump_batches: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Run directory produced by simulate.
    #[arg(long)]
    run: PathBuf,
    /// Metric column, e.g. vol_diff, v_dn, f0, f_top_proper.
    #[arg(long)]
    metric: String,
    /// power-law or log-power.
    #[arg(long, default_value = "power-law")]
    model: String,
    /// Fixed log power p for the log-power model.
    #[arg(long, default_value_t = 1)]
    log_power_p: u32,
}

#[derive(Args)]
struct JevalArgs {
    /// Dimension n.
    #[arg(short = 'n', long)]
    dim: usize,
    /// Exponent tuple, comma separated: -l 1,1,1
    #[arg(short = 'l', long, value_delimiter = ',')]
    l: Vec<f64>,
    /// Alpha.
    #[arg(short = 'a', long)]
    alpha: f64,
    /// Point count N (scientific notation accepted).
    #[arg(short = 'N', long = "big-n")]
    n_points: Option<String>,
    /// N-grid for the log-regime fit, comma separated.
    #[arg(long, value_delimiter = ',')]
    n_grid: Vec<String>,
    /// direct | transformed | asymptotic | both | log-regime
    #[arg(long, default_value = "both")]
    method: String,
    /// Monte Carlo samples for the transformed route.
    #[arg(long, default_value_t = 2_000_000)]
    samples: usize,
    /// Quadrature nodes per axis (n <= 3) or total points (n >= 4).
    #[arg(long, default_value_t = 48)]
    grid: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SevalArgs {
    /// Exponent tuple, comma separated: -q 0,0,-1
    #[arg(short = 'q', long, value_delimiter = ',')]
    q: Vec<f64>,
    /// Alpha (must be at most 1/(2n)).
    #[arg(short = 'a', long)]
    alpha: f64,
    /// N-grid, comma separated; scientific notation accepted.
    #[arg(long, value_delimiter = ',')]
    n_grid: Vec<String>,
    #[arg(long, default_value_t = 2_000_000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// geometry | hull-oracle | substitution | asymptotics | all
    suite: String,
}

#[derive(Args)]
struct DemoArgs {
    /// corner-miss | occupancy
    name: String,
    /// Dimension for corner-miss.
    #[arg(short = 'n', long, default_value_t = 3)]
    dim: usize,
    /// Polytope for occupancy.
    #[arg(short = 'p', long, default_value = "cube-3")]
    polytope: String,
    /// Points per replication (scientific notation accepted).
    #[arg(short = 'N', long = "big-n")]
    n_points: String,
    /// Replications.
    #[arg(short = 'r', long)]
    reps: String,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("HULLAW_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: could not configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Jeval(args) => cmd_jeval(args),
        Command::Seval(args) => cmd_seval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Demo(args) => cmd_demo(args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Accepts 1e4-style scientific notation for counts.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s
        .parse()
        .map_err(|_| format!("{s:?} is not a count"))?;
    if !(f.is_finite() && f >= 0.0 && f <= 2f64.powi(53) && f.fract() == 0.0) {
        return Err(format!("{s:?} is not a nonnegative integer count"));
    }
    Ok(f as u64)
}

/// Explicit seed, or one drawn from entropy (printed so runs can be replayed).
fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s = rand::rngs::OsRng.next_u64();
            println!("seed {s}");
            s
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let poly = if let Some(result) = polytope::builtin(&args.name) {
        result.map_err(|e| e.to_string())?
    } else {
        let path = PathBuf::from(&args.name);
        if !path.exists() {
            return Err(format!(
                "unknown polytope {:?}: expected cube-N, simplex-N, prism-N or a file path",
                args.name
            ));
        }
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        // either a full polytope object or a plain vertex list
        if let Ok(json) = serde_json::from_str::<polytope::PolytopeJson>(&text) {
            polytope::from_json(&json).map_err(|e| e.to_string())?
        } else {
            let vertices: Vec<Vec<f64>> = serde_json::from_str(&text)
                .map_err(|e| format!("{}: neither polytope JSON nor vertex list: {e}", path.display()))?;
            polytope::from_vertices(&vertices).map_err(|e| e.to_string())?
        }
    };
    let json = serde_json::to_string_pretty(&poly.to_json()).expect("serializes");
    match args.out {
        Some(path) => {
            std::fs::write(&path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
            println!("wrote {} ({} vertices, {} facets)", path.display(), poly.vertices().len(), poly.facets().len());
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, String> {
    let plan = report::load_plan(&args.plan).map_err(|e| e.to_string())?;
    let poly = report::resolve_polytope(&plan.polytope).map_err(|e| e.to_string())?;
    let table = harness::run_plan(&plan, &poly).map_err(|e| e.to_string())?;
    if args.dump_batches {
        let dir = args.out.join("batches");
        std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for rec in &table.records {
            let batch = hullaw_core::sampler::sample_boundary_stream(
                &poly,
                rec.n_points as usize,
                plan.master_seed,
                rec.stream,
            );
            let path = dir.join(format!("batch_{}_{}.csv", rec.n_points, rec.replication));
            let mut file =
                std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            hullaw_core::sampler::write_batch_csv(&batch, &mut file)
                .map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    let fits = report::default_fits(&table, poly.dimension());
    report::write_run_directory(&args.out, &plan, &table, fits).map_err(|e| e.to_string())?;
    println!(
        "run complete: {} records, {} failures -> {}",
        table.records.len(),
        table.failures.len(),
        args.out.display()
    );
    if !table.failures.is_empty() {
        for f in &table.failures {
            eprintln!("failure: {f}");
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit(args: FitArgs) -> Result<ExitCode, String> {
    let summary = report::load_summary(&args.run.join("summary.json")).map_err(|e| e.to_string())?;
    let points: Vec<(u64, f64, f64)> = summary
        .per_metric
        .get(&args.metric)
        .ok_or(format!(
            "metric {:?} not in run (have: {})",
            args.metric,
            summary.per_metric.keys().cloned().collect::<Vec<_>>().join(", ")
        ))?
        .iter()
        .map(|m| (m.n_points, m.mean, m.stderr))
        .collect();
    let fit = match args.model.as_str() {
        "power-law" => fit_power_law(&points).map_err(|e| e.to_string())?,
        "log-power" => fit_log_power(&points, args.log_power_p).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown model {other:?}: power-law or log-power")),
    };
    let mut row = serde_json::to_value(&fit).expect("fit serializes");
    if args.model == "log-power" {
        let (best, residuals) = preferred_log_power(&points, 4).map_err(|e| e.to_string())?;
        row["preferred_p"] = serde_json::json!(best);
        row["residuals"] = serde_json::json!(residuals);
    }
    println!("{row}");
    Ok(ExitCode::SUCCESS)
}

fn jeval_row(dim: usize, l: &[f64], alpha: f64, regime: &str, r: &JEvalResult) -> String {
    serde_json::json!({
        "n": dim,
        "l": l,
        "alpha": alpha,
        "N": r.n_points,
        "method": serde_json::to_value(r.method).expect("method"),
        "value": r.value,
        "error_estimate": r.error_estimate,
        "regime": regime,
    })
    .to_string()
}

fn cmd_jeval(args: JevalArgs) -> Result<ExitCode, String> {
    if args.l.len() != args.dim {
        return Err(format!(
            "dimension {} does not match the {} exponents",
            args.dim,
            args.l.len()
        ));
    }
    let ev = ExponentVector::new(args.l.clone(), args.alpha).map_err(|e| e.to_string())?;
    let regime = serde_json::to_value(ev.regime())
        .expect("regime")
        .as_str()
        .expect("regime string")
        .to_string();
    let seed = resolve_seed(args.seed);
    let grid: Result<Vec<u64>, String> = args.n_grid.iter().map(|s| parse_count(s)).collect();
    let grid = grid?;
    match args.method.as_str() {
        "log-regime" => {
            if grid.len() < 4 {
                return Err("log-regime needs --n-grid with at least 4 points".into());
            }
            let fit = j_log_regime(&ev, &grid, args.samples, seed).map_err(|e| e.to_string())?;
            for r in &fit.evaluations {
                println!("{}", jeval_row(args.dim, &args.l, args.alpha, &regime, r));
            }
            println!(
                "{}",
                serde_json::json!({
                    "fit": {
                        "exponent": fit.exponent,
                        "log_power": fit.log_power,
                        "fitted_constant": fit.fitted_constant,
                        "preferred_power": fit.preferred_power,
                        "residuals": fit.residuals,
                    }
                })
            );
            return Ok(ExitCode::SUCCESS);
        }
        _ => {}
    }
    let n_points = match (&args.n_points, grid.as_slice()) {
        (Some(s), _) => vec![parse_count(s)?],
        (None, g) if !g.is_empty() => g.to_vec(),
        _ => return Err("need -N or --n-grid".into()),
    };
    for (i, &np) in n_points.iter().enumerate() {
        let rows: Vec<JEvalResult> = match args.method.as_str() {
            "direct" => vec![j_direct(&ev, np, args.grid).map_err(|e| e.to_string())?],
            "transformed" => {
                vec![j_transformed(&ev, np, args.samples, seed.wrapping_add(i as u64))
                    .map_err(|e| e.to_string())?]
            }
            "asymptotic" => vec![j_asymptotic(&ev, np).map_err(|e| e.to_string())?],
            "both" => vec![
                j_direct(&ev, np, args.grid).map_err(|e| e.to_string())?,
                j_transformed(&ev, np, args.samples, seed.wrapping_add(i as u64))
                    .map_err(|e| e.to_string())?,
            ],
            other => {
                return Err(format!(
                    "unknown method {other:?}: direct, transformed, asymptotic, both, log-regime"
                ))
            }
        };
        for r in rows {
            println!("{}", jeval_row(args.dim, &args.l, args.alpha, &regime, &r));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_seval(args: SevalArgs) -> Result<ExitCode, String> {
    if args.n_grid.is_empty() {
        return Err("need --n-grid".into());
    }
    let seed = resolve_seed(args.seed);
    for (i, ns) in args.n_grid.iter().enumerate() {
        let np = parse_count(ns)?;
        let (value, stderr) = s_eval(&args.q, args.alpha, np, args.samples, seed.wrapping_add(i as u64))
            .map_err(|e| e.to_string())?;
        let (sym, sym_err) = s_eval_symmetrized(
            &args.q,
            args.alpha,
            np,
            args.samples,
            seed.wrapping_add(1000 + i as u64),
        )
        .map_err(|e| e.to_string())?;
        let ln_n = (np as f64).ln();
        println!(
            "{}",
            serde_json::json!({
                "q": args.q,
                "alpha": args.alpha,
                "N": np,
                "value": value,
                "stderr": stderr,
                "symmetrized": sym,
                "symmetrized_stderr": sym_err,
                "symmetrized_over_ln_n": sym / ln_n,
            })
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let results = verify::run_suite(&args.suite).ok_or(format!(
        "unknown suite {:?}: one of {}",
        args.suite,
        verify::suite_names().join(", ")
    ))?;
    let mut failed = 0usize;
    for c in &results {
        println!(
            "[{}] {} - {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        if !c.passed {
            failed += 1;
        }
    }
    println!("{} checks, {} failed", results.len(), failed);
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_demo(args: DemoArgs) -> Result<ExitCode, String> {
    let n_points = parse_count(&args.n_points)?;
    let reps = parse_count(&args.reps)?;
    let seed = resolve_seed(args.seed);
    match args.name.as_str() {
        "corner-miss" => {
            let r = corner_miss(args.dim, n_points, reps, seed).map_err(|e| e.to_string())?;
            println!(
                "corner-miss n={} N={} reps={}: measured {} predicted {} (sigma {})",
                args.dim,
                n_points,
                reps,
                fmt_f64(r.measured),
                fmt_f64(r.predicted),
                fmt_f64(r.sigma)
            );
            Ok(ExitCode::SUCCESS)
        }
        "occupancy" => {
            let poly = match polytope::builtin(&args.polytope) {
                Some(p) => p.map_err(|e| e.to_string())?,
                None => return Err(format!("unknown polytope {:?}", args.polytope)),
            };
            let frac = occupancy_demo(&poly, n_points, reps, seed);
            println!(
                "occupancy {} N={} reps={}: bound satisfied in fraction {}",
                args.polytope,
                n_points,
                reps,
                fmt_f64(frac)
            );
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown demo {other:?}: corner-miss or occupancy")),
    }
}
