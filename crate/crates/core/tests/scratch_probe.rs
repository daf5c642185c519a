use hullaw_core::asymptotics::*;

#[test]
#[ignore]
fn probe_interior_rate() {
    let ev = ExponentVector::new(vec![1.0, 1.0, 1.0], 0.1).unwrap();
    for (i, n) in [1_000u64, 10_000, 100_000].iter().enumerate() {
        let t = j_transformed(&ev, *n, 8_000_000, 42 + i as u64).unwrap();
        let a = j_asymptotic(&ev, *n).unwrap();
        let dev = (t.value / a.value - 1.0).abs();
        println!(
            "N={n}: transformed={:.6e} (+-{:.2e}) asymptotic={:.6e} dev={:.5} relerr={:.2e}",
            t.value, t.error_estimate, a.value, dev, t.error_estimate / t.value
        );
    }
}

#[test]
#[ignore]
fn probe_log_regime() {
    let ev = ExponentVector::new(vec![1.0, 1.0, 0.0], 1.0 / 6.0).unwrap();
    for (i, n) in [1_000u64, 10_000, 100_000, 1_000_000].iter().enumerate() {
        let t = j_transformed(&ev, *n, 8_000_000, 7 + i as u64).unwrap();
        let nn = *n as f64;
        let stat = t.value * nn * nn / nn.ln();
        println!("N={n}: J={:.6e} stat={:.6} relerr={:.2e}", t.value, stat, t.error_estimate / t.value);
    }
    let fit = j_log_regime(&ev, &[1_000, 10_000, 100_000, 1_000_000], 4_000_000, 5).unwrap();
    println!("fit: exponent={} p={} c={:.4} preferred={}", fit.exponent, fit.log_power, fit.fitted_constant, fit.preferred_power);
}

#[test]
#[ignore]
fn probe_multistrict_stat() {
    // interior (all strict) vector: stat J * N^{1.5} / ln N should tend to 0
    let ev = ExponentVector::new(vec![1.0, 1.0, 1.0], 1.0 / 6.0).unwrap();
    for (i, n) in [1_000u64, 10_000, 100_000, 1_000_000].iter().enumerate() {
        let t = j_transformed(&ev, *n, 2_000_000, 21 + i as u64).unwrap();
        let nn = *n as f64;
        let stat = t.value * nn.powf(1.5) / nn.ln();
        println!("N={n}: stat={:.6}", stat);
    }
}

#[test]
#[ignore]
fn probe_s_eval() {
    for (i, n) in [1_000u64, 10_000, 100_000, 1_000_000].iter().enumerate() {
        let (v, e) = s_eval_symmetrized(&[0.0, 0.0, -1.0], 1.0/6.0, *n, 2_000_000, 33 + i as u64).unwrap();
        let nn = *n as f64;
        println!("N={n}: sym={:.5} (+-{:.2e}) sym/lnN={:.5}", v, e, v / nn.ln());
        let (v2, _e2) = s_eval(&[-1.0, 0.0, 0.0], 1.0/6.0, *n, 2_000_000, 133 + i as u64).unwrap();
        println!("      q=(-1,0,0): val={:.5} val/lnN={:.5}", v2, v2 / nn.ln());
    }
}

#[test]
#[ignore]
fn probe_verify_suites() {
    for suite in ["hull-oracle", "asymptotics"] {
        for c in hullaw_core::verify::run_suite(suite).unwrap() {
            println!("[{}] {} — {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }
}

#[test]
#[ignore]
fn probe_plan_timing() {
    use hullaw_core::harness::*;
    use std::time::Instant;
    let cube3 = hullaw_core::make_cube(3).unwrap();
    let t = Instant::now();
    let plan = ExperimentPlan {
        polytope: PolytopeRef::Builtin("cube-3".into()),
        n_grid: vec![32768],
        replications: 8,
        master_seed: 1,
        metrics: Metric::all(),
    };
    let table = run_plan(&plan, &cube3).unwrap();
    println!("cube-3 N=32768 x8 reps: {:?} ({} failures)", t.elapsed(), table.failures.len());
    for rec in table.records.iter().take(1) {
        println!("  sample record: {:?}", rec.values);
    }
    let cube4 = hullaw_core::make_cube(4).unwrap();
    let t = Instant::now();
    let plan = ExperimentPlan {
        polytope: PolytopeRef::Builtin("cube-4".into()),
        n_grid: vec![8192],
        replications: 8,
        master_seed: 1,
        metrics: vec![Metric::VolDiff, Metric::F0, Metric::FTopProper],
    };
    let table = run_plan(&plan, &cube4).unwrap();
    println!("cube-4 N=8192 x8 reps: {:?} ({} failures)", t.elapsed(), table.failures.len());
    for rec in table.records.iter().take(1) {
        println!("  sample record: {:?}", rec.values);
    }
}

#[test]
#[ignore]
fn probe_acceptance_fits() {
    use hullaw_core::harness::*;
    let cube3 = hullaw_core::make_cube(3).unwrap();
    let plan = ExperimentPlan {
        polytope: PolytopeRef::Builtin("cube-3".into()),
        n_grid: (9..=15).map(|k| 1u64 << k).collect(),
        replications: 60,
        master_seed: 42,
        metrics: vec![Metric::VolDiff, Metric::VCn, Metric::VDn],
    };
    let table = run_plan(&plan, &cube3).unwrap();
    let vd = aggregate(&table, "vol_diff");
    let fit = fit_power_law(&vd).unwrap();
    println!("vol_diff slope {:.4} +- {:.4} r2 {:.5}", fit.exponent_or_power, fit.stderr, fit.r_squared);
    let vdn = aggregate(&table, "v_dn");
    let fit2 = fit_power_law(&vdn).unwrap();
    println!("v_dn slope {:.4} +- {:.4} r2 {:.5}", fit2.exponent_or_power, fit2.stderr, fit2.r_squared);

    // counts on cube vs simplex
    for body in ["cube-3", "simplex-3"] {
        let poly = hullaw_core::builtin(body).unwrap().unwrap();
        let plan = ExperimentPlan {
            polytope: PolytopeRef::Builtin(body.into()),
            n_grid: (7..=15).map(|k| 1u64 << k).collect(),
            replications: 60,
            master_seed: 7,
            metrics: vec![Metric::F0, Metric::FTopProper],
        };
        let table = run_plan(&plan, &poly).unwrap();
        for col in ["f0", "f_top_proper"] {
            let pts = aggregate(&table, col);
            let fit = fit_log_power(&pts, 1).unwrap();
            let (bestp, _) = preferred_log_power(&pts, 4).unwrap();
            println!("{body} {col}: c={:.4} +- {:.4} prefer_p={bestp}", fit.constant, fit.stderr);
        }
    }

    // n=4 volume
    let cube4 = hullaw_core::make_cube(4).unwrap();
    let plan = ExperimentPlan {
        polytope: PolytopeRef::Builtin("cube-4".into()),
        n_grid: (9..=13).map(|k| 1u64 << k).collect(),
        replications: 40,
        master_seed: 5,
        metrics: vec![Metric::VolDiff, Metric::FTopProper],
    };
    let table = run_plan(&plan, &cube4).unwrap();
    let fit = fit_power_law(&aggregate(&table, "vol_diff")).unwrap();
    println!("cube4 vol_diff slope {:.4} +- {:.4}", fit.exponent_or_power, fit.stderr);
    let (bestp, res) = preferred_log_power(&aggregate(&table, "f_top_proper"), 4).unwrap();
    println!("cube4 f_top_proper prefer_p={bestp} residuals {:?}", res);
}

#[test]
#[ignore]
fn probe_voldiff_mc_check_4d() {
    use rand::{Rng, SeedableRng};
    // independent route: rejection-sample the missed volume of one 4D hull
    let cube = hullaw_core::make_cube(4).unwrap();
    for n in [512usize, 8192] {
        let batch = hullaw_core::sample_boundary(&cube, n, 1234);
        let mesh = hullaw_core::convex_hull(&batch.coords()).unwrap();
        let kernel_voldiff = cube.volume() - mesh.volume;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let trials = 4_000_000usize;
        let mut outside = 0usize;
        for _ in 0..trials {
            let p: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
            let out = mesh
                .merged_facets
                .iter()
                .any(|f| hullaw_core::linalg::dot(&f.normal, &p) > f.offset + 1e-12);
            if out {
                outside += 1;
            }
        }
        let mc = outside as f64 / trials as f64;
        let sigma = (mc * (1.0 - mc) / trials as f64).sqrt();
        println!(
            "N={n}: kernel voldiff {kernel_voldiff:.6e} vs MC {mc:.6e} +- {sigma:.2e} ({}sigma)",
            ((kernel_voldiff - mc) / sigma).abs().round()
        );
    }
}

#[test]
#[ignore]
fn probe_4d_slope_trend() {
    use hullaw_core::harness::*;
    let cube4 = hullaw_core::make_cube(4).unwrap();
    let plan = ExperimentPlan {
        polytope: PolytopeRef::Builtin("cube-4".into()),
        n_grid: (9..=17).map(|k| 1u64 << k).collect(),
        replications: 48,
        master_seed: 15,
        metrics: vec![Metric::VolDiff],
    };
    let t = std::time::Instant::now();
    let table = run_plan(&plan, &cube4).unwrap();
    let pts = aggregate(&table, "vol_diff");
    for w in pts.windows(2) {
        let (n1, m1, _) = w[0];
        let (n2, m2, _) = w[1];
        let slope = (m2.ln() - m1.ln()) / ((n2 as f64).ln() - (n1 as f64).ln());
        println!("local slope {} -> {}: {slope:.4}", n1, n2);
    }
    println!("elapsed {:?}", t.elapsed());
}
