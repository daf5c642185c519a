//! Runtime check suites behind the `verify` command. Each suite runs a set of
//! invariants with fixed seeds and returns structured pass/fail results; the
//! same functions back the integration tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::asymptotics::{
    self, crucial_subst_check, forward_map, inverse_map, jacobian_det, j_direct, j_transformed,
    region_member, region_member_chain, CrucialTestFn, ExponentVector,
};
use crate::hull::convex_hull;
use crate::oracle::brute_force_hull_3d;
use crate::polytope::{from_vertices, make_cube, make_prism, make_simplex};
use crate::sampler::sample_boundary;
use crate::{linalg, stats};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn suite_names() -> &'static [&'static str] {
    &["geometry", "hull-oracle", "substitution", "asymptotics", "all"]
}

pub fn run_suite(name: &str) -> Option<Vec<CheckResult>> {
    match name {
        "geometry" => Some(geometry_suite()),
        "hull-oracle" => Some(hull_oracle_suite()),
        "substitution" => Some(substitution_suite()),
        "asymptotics" => Some(asymptotics_suite()),
        "all" => {
            let mut out = geometry_suite();
            out.extend(hull_oracle_suite());
            out.extend(substitution_suite());
            out.extend(asymptotics_suite());
            Some(out)
        }
        _ => None,
    }
}

pub fn geometry_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // builders across the supported dimensions
    let mut ok = true;
    let mut detail = String::new();
    for n in 2..=6 {
        if let Err(e) = make_cube(n) {
            ok = false;
            detail = format!("cube-{n}: {e}");
        }
        if let Err(e) = make_simplex(n) {
            ok = false;
            detail = format!("simplex-{n}: {e}");
        }
        if n >= 3 {
            if let Err(e) = make_prism(n) {
                ok = false;
                detail = format!("prism-{n}: {e}");
            }
        }
    }
    out.push(check("builders-validate", ok, detail));

    // closed-form flag counts
    let mut ok = true;
    let mut detail = String::new();
    for n in 2..=5u32 {
        let cube_flags = make_cube(n as usize).unwrap().flag_count();
        let expect = (1u64 << n) * (1..=n as u64).product::<u64>();
        if cube_flags != expect {
            ok = false;
            detail = format!("cube-{n}: {cube_flags} != {expect}");
        }
        let simplex_flags = make_simplex(n as usize).unwrap().flag_count();
        let expect = (1..=n as u64 + 1).product::<u64>();
        if simplex_flags != expect {
            ok = false;
            detail = format!("simplex-{n}: {simplex_flags} != {expect}");
        }
    }
    out.push(check("flag-closed-forms", ok, detail));

    // flag(P) = sum over facets of flag(F)
    let mut ok = true;
    let mut detail = String::new();
    for poly in [
        make_cube(3).unwrap(),
        make_cube(4).unwrap(),
        make_simplex(4).unwrap(),
        make_prism(3).unwrap(),
        make_prism(4).unwrap(),
    ] {
        let total: u64 = poly.facet_flag_counts().iter().sum();
        if total != poly.flag_count() {
            ok = false;
            detail = format!("sum {total} != flag {}", poly.flag_count());
        }
    }
    out.push(check("flag-facet-identity", ok, detail));

    // normal cones of the vertices partition the sphere
    for poly in [make_cube(3).unwrap(), make_simplex(3).unwrap()] {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 10_000;
        let mut assigned = 0usize;
        let mut ok = true;
        for _ in 0..trials {
            let mut u = [0.0f64; 3];
            loop {
                let mut norm2 = 0.0;
                for x in u.iter_mut() {
                    *x = rng.sample(StandardNormal);
                    norm2 += *x * *x;
                }
                if norm2 > 1e-12 {
                    let inv = norm2.sqrt().recip();
                    u.iter_mut().for_each(|x| *x *= inv);
                    break;
                }
            }
            match poly.vertex_for_direction(&u, 1e-12) {
                Ok(Some(_)) => assigned += 1,
                _ => ok = false,
            }
        }
        out.push(check(
            &format!("normal-cone-partition-{}f", poly.facets().len()),
            ok && assigned == trials,
            format!("{assigned}/{trials} directions assigned to exactly one first matching cone"),
        ));
    }

    // reconstruction through the hull preserves the f-vector and areas
    let cube = make_cube(3).unwrap();
    let rebuilt = from_vertices(cube.vertices()).unwrap();
    let ok = rebuilt.facets().len() == cube.facets().len()
        && rebuilt.vertices().len() == cube.vertices().len()
        && (rebuilt.surface_area() - cube.surface_area()).abs() <= 1e-9
        && rebuilt.flag_count() == cube.flag_count();
    out.push(check(
        "from-vertices-roundtrip",
        ok,
        format!(
            "facets {} area {:.12} flags {}",
            rebuilt.facets().len(),
            rebuilt.surface_area(),
            rebuilt.flag_count()
        ),
    ));

    out
}

pub fn hull_oracle_suite() -> Vec<CheckResult> {
    let cube = make_cube(3).unwrap();
    let simplex = make_simplex(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut mismatches = 0usize;
    let mut degenerate = 0usize;
    let batches = 200usize;
    let mut first_bad = String::new();
    for case in 0..batches {
        let poly = if case % 2 == 0 { &cube } else { &simplex };
        let n = rng.gen_range(6..=14usize);
        let seed: u64 = rng.gen();
        let batch = sample_boundary(poly, n, seed);
        let coords = batch.coords();
        let oracle = match brute_force_hull_3d(&coords) {
            Some(o) => o,
            None => {
                degenerate += 1;
                continue;
            }
        };
        let mesh = match convex_hull(&coords) {
            Ok(m) => m,
            Err(e) => {
                mismatches += 1;
                if first_bad.is_empty() {
                    first_bad = format!("case {case}: kernel failed: {e}");
                }
                continue;
            }
        };
        let same = mesh.f0 == oracle.f0
            && mesh.f_top == oracle.f_top
            && mesh.hull_vertex_ids == oracle.vertex_ids
            && (mesh.volume - oracle.volume).abs() <= 1e-9 * oracle.volume.max(1e-30);
        if !same {
            mismatches += 1;
            if first_bad.is_empty() {
                first_bad = format!(
                    "case {case} seed {seed} N {n}: kernel (f0={}, f_top={}, vol={:.12}) vs \
                     oracle (f0={}, f_top={}, vol={:.12})",
                    mesh.f0, mesh.f_top, mesh.volume, oracle.f0, oracle.f_top, oracle.volume
                );
            }
        }
    }
    vec![check(
        "hull-oracle-equivalence",
        mismatches == 0,
        format!("{batches} batches, {mismatches} mismatches, {degenerate} degenerate skips. {first_bad}"),
    )]
}

pub fn substitution_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..10_000 / n {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
            let back = inverse_map(&forward_map(&x).unwrap()).unwrap();
            for (a, b) in back.iter().zip(&x) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    out.push(check(
        "map-roundtrip",
        worst <= 1e-12,
        format!("worst deviation {worst:.3e} over random boxes, n = 2..6"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let mut disagreements = 0usize;
    for n in 3..=5 {
        for _ in 0..100_000 {
            let beta = rng.gen_range(0.5..4.0);
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..2.0 * beta)).collect();
            if region_member(&y, beta) != region_member_chain(&y, beta) {
                disagreements += 1;
            }
        }
    }
    out.push(check(
        "region-characterizations",
        disagreements == 0,
        format!("{disagreements} disagreements over 300000 points"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut worst_rel: f64 = 0.0;
    for n in 3..=6usize {
        for _ in 0..40 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
            let exact = jacobian_det(&v).unwrap();
            let h = 1e-6;
            let mut jac = vec![0.0; n * n];
            for j in 0..n {
                let mut vp = v.clone();
                let mut vm = v.clone();
                vp[j] += h;
                vm[j] -= h;
                let tp = inverse_map(&vp).unwrap();
                let tm = inverse_map(&vm).unwrap();
                for i in 0..n {
                    jac[i * n + j] = (tp[i] - tm[i]) / (2.0 * h);
                }
            }
            let num = linalg::det_in_place(&mut jac, n).abs();
            worst_rel = worst_rel.max((num - exact).abs() / exact);
        }
    }
    out.push(check(
        "jacobian-closed-form",
        worst_rel < 1e-6,
        format!("worst relative error {worst_rel:.3e} vs finite differences"),
    ));

    out
}

pub fn asymptotics_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();

    // cross-method consistency on a catalog spanning interior and extremal
    // regimes in n = 3 and 4
    let catalog: Vec<(Vec<f64>, f64, u64)> = vec![
        (vec![0.0, 0.0, 0.0], 1.0 / 6.0, 20),
        (vec![0.0, 0.0, 0.0], 1.0 / 6.0, 60),
        (vec![1.0, 1.0, 1.0], 0.1, 20),
        (vec![1.0, 1.0, 1.0], 0.1, 60),
        (vec![0.5, 0.5, 0.5], 0.2, 40),
        (vec![1.5, 1.0, 0.5], 0.1, 40),
        (vec![1.0, 1.0, 0.0], 1.0 / 6.0, 20),
        (vec![1.0, 1.0, 0.0], 1.0 / 6.0, 60),
        (vec![1.5, 1.5, 1.0], 0.1, 40),
        (vec![0.25, 0.25, 0.25], 1.0 / 6.0, 30),
        (vec![0.0, 0.0, 0.0, 0.0], 0.05, 20),
        (vec![0.0, 0.0, 0.0, 0.0], 0.05, 60),
        (vec![1.0, 1.0, 1.0, 1.0], 0.05, 40),
        (vec![2.0, 2.0, 2.0, 2.0], 0.05, 40),
        (vec![1.0, 1.0, 1.0, 0.0], 0.125, 40),
        (vec![2.0, 1.0, 1.0, 0.5], 0.05, 40),
        (vec![0.5, 0.5, 0.5, 0.5], 0.1, 30),
        (vec![1.5, 1.5, 1.5, 1.5], 0.05, 50),
        (vec![2.5, 2.5, 2.0, 2.0], 0.04, 40),
        (vec![1.0, 0.5, 0.5, 0.0], 0.125, 30),
    ];
    let mut bad = 0usize;
    let mut first_bad = String::new();
    for (i, (l, alpha, n_pts)) in catalog.iter().enumerate() {
        let ev = ExponentVector::new(l.clone(), *alpha).expect("catalog entries are valid");
        let direct = j_direct(&ev, *n_pts, 40).expect("direct evaluates");
        let transformed =
            j_transformed(&ev, *n_pts, 600_000, 1000 + i as u64).expect("transformed evaluates");
        let tol = 3.0 * (direct.error_estimate + transformed.error_estimate)
            + 1e-10 * direct.value.abs();
        if (direct.value - transformed.value).abs() > tol {
            bad += 1;
            if first_bad.is_empty() {
                first_bad = format!(
                    "case {i} l={l:?} alpha={alpha} N={n_pts}: direct {:.6e} vs transformed {:.6e} (tol {tol:.2e})",
                    direct.value, transformed.value
                );
            }
        }
    }
    out.push(check(
        "direct-vs-transformed-catalog",
        bad == 0,
        format!("{bad} of {} catalog cases disagree. {first_bad}", catalog.len()),
    ));

    // interior leading term: the ratio approaches one
    let ev = ExponentVector::new(vec![1.0, 1.0, 1.0], 0.1).unwrap();
    let t = j_transformed(&ev, 10_000, 2_000_000, 5).unwrap();
    let a = asymptotics::j_asymptotic(&ev, 10_000).unwrap();
    let dev = (t.value / a.value - 1.0).abs();
    out.push(check(
        "interior-leading-term",
        dev < 0.1,
        format!("|ratio - 1| = {dev:.4} at N = 1e4"),
    ));

    // lower-bound shape: J * N^{n - L/(n-1)} / (ln N)^{#extremal} stays away
    // from zero across the grid
    let ev = ExponentVector::new(vec![1.0, 1.0, 0.0], 1.0 / 6.0).unwrap();
    let grid = [1_000u64, 10_000, 100_000, 1_000_000];
    let mut stats_vals = Vec::new();
    for (i, &n) in grid.iter().enumerate() {
        let r = j_transformed(&ev, n, 1_000_000, 42 + i as u64).unwrap();
        let nn = n as f64;
        stats_vals.push(r.value * nn.powf(-ev.decay_exponent()) / nn.ln());
    }
    let min = stats_vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = stats_vals.iter().cloned().fold(0.0f64, f64::max);
    out.push(check(
        "log-regime-lower-bound",
        min > 0.1 * max && min > 0.0,
        format!("scaled statistic range [{min:.4}, {max:.4}] over N = 1e3..1e6"),
    ));

    // hyperplane-to-coordinates substitution identity on the catalog
    let f1 = CrucialTestFn::GammaProduct {
        exponents: vec![2.0, 2.0, 2.0],
    };
    let r1 = crucial_subst_check(&f1, 2_000_000, 7).unwrap();
    out.push(check(
        "crucial-substitution-gamma",
        r1.agrees_within(3.0),
        format!("lhs {:.5} +- {:.1e} vs rhs {:.5} +- {:.1e}", r1.lhs, r1.lhs_stderr, r1.rhs, r1.rhs_stderr),
    ));
    let f2 = CrucialTestFn::BoxPower {
        a: 1.0 / 6.0,
        power: 8.0,
        exponents: vec![3.0, 2.0, 2.0],
    };
    let r2 = crucial_subst_check(&f2, 2_000_000, 8).unwrap();
    out.push(check(
        "crucial-substitution-box",
        r2.agrees_within(3.0),
        format!("lhs {:.6} +- {:.1e} vs rhs {:.6} +- {:.1e}", r2.lhs, r2.lhs_stderr, r2.rhs, r2.rhs_stderr),
    ));
    let divergent = CrucialTestFn::GammaProduct {
        exponents: vec![0.0, 0.0],
    };
    out.push(check(
        "crucial-substitution-divergence-gate",
        crucial_subst_check(&divergent, 100, 1).is_err(),
        "pure exponential in n = 2 is rejected".into(),
    ));

    // sampler marginals on a cube facet stay uniform (KS at 1e-3)
    let cube = make_cube(3).unwrap();
    let batch = sample_boundary(&cube, 100_000, 31337);
    let mut ks_worst: f64 = 0.0;
    for axis_pair in [(0usize, [1usize, 2]), (2usize, [0, 1])] {
        let mut samples: Vec<Vec<f64>> = vec![Vec::new(), Vec::new()];
        for p in &batch.points {
            if p.facet_id == 2 * axis_pair.0 {
                for (slot, &c) in axis_pair.1.iter().enumerate() {
                    samples[slot].push(p.coords[c]);
                }
            }
        }
        for s in &mut samples {
            ks_worst = ks_worst.max(stats::ks_statistic_uniform(s));
        }
    }
    let ks_crit = stats::ks_critical(1e-3, batch.points.len() / 6);
    out.push(check(
        "facet-marginal-uniformity",
        ks_worst < ks_crit,
        format!("worst KS statistic {ks_worst:.5} vs critical {ks_crit:.5}"),
    ));

    out
}
