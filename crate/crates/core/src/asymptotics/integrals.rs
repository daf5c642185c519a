//! Evaluators for the box integral
//!
//! ```text
//!   J(l) = int_{[0,1]^n} (1 - alpha * sum_i prod_{j != i} t_j)^{N-n}
//!          prod_i t_i^{n-2-l_i} dt
//! ```
//!
//! by three routes: direct quadrature over the unit box (tensor Gauss-Jacobi
//! with the endpoint exponents matched, or a Halton sequence with the
//! polynomial weight absorbed for n >= 4), importance sampling of the
//! transformed constrained integral with independent Gamma proposals, and
//! the closed-form leading term valid in the interior regime. The
//! ordered-region integrals with logarithmic growth are evaluated by
//! sequential importance sampling with exact-range power and log-uniform
//! proposals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use super::quadrature::{GaussJacobi, Halton};
use super::substitution::region_member;
use super::{ExponentVector, JEvalResult, Method, Regime};
use crate::special::{gamma, ln_gamma};
use crate::EvalError;

/// sum_i prod_{j != i} t_j
fn cofactor_sum(t: &[f64]) -> f64 {
    let n = t.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut p = 1.0;
        for (j, &v) in t.iter().enumerate() {
            if j != i {
                p *= v;
            }
        }
        total += p;
        let _ = n;
    }
    total
}

/// (1 - alpha * cofactor_sum)^{N-n}, clamped at zero where the bracket turns
/// negative (only possible for alpha * n > 1).
fn bracket_power(t: &[f64], alpha: f64, power: f64) -> f64 {
    let base = 1.0 - alpha * cofactor_sum(t);
    if base <= 0.0 {
        0.0
    } else if power == 0.0 {
        1.0
    } else {
        (power * base.ln()).exp()
    }
}

/// Direct evaluation over the unit box. For n <= 3 this is tensor-product
/// Gauss-Jacobi with per-axis endpoint exponent n-2-l_i and `grid` nodes per
/// axis (the refinement to 2*grid provides the error estimate). For n >= 4 a
/// Halton sequence is used with t_i = v_i^{1/(n-1-l_i)}, which absorbs the
/// polynomial weight exactly; `grid` is then the total point count.
pub fn j_direct(ev: &ExponentVector, n_points: u64, grid: usize) -> Result<JEvalResult, EvalError> {
    if n_points < ev.n() as u64 {
        return Err(EvalError::InvalidArgument(format!(
            "N = {n_points} must be at least n = {}",
            ev.n()
        )));
    }
    let power = (n_points - ev.n() as u64) as f64;
    let (value, error_estimate) = if ev.n() <= 3 {
        let coarse = tensor_gauss_jacobi(ev, power, grid.max(8))?;
        let fine = tensor_gauss_jacobi(ev, power, 2 * grid.max(8))?;
        (fine, (fine - coarse).abs())
    } else {
        let m = grid.max(1000);
        let full = halton_direct(ev, power, m);
        let half = halton_direct(ev, power, m / 2);
        (full, (full - half).abs())
    };
    Ok(JEvalResult {
        value,
        method: Method::Direct,
        n_points,
        error_estimate,
    })
}

fn tensor_gauss_jacobi(ev: &ExponentVector, power: f64, m: usize) -> Result<f64, EvalError> {
    let n = ev.n();
    let rules: Vec<GaussJacobi> = ev
        .l()
        .iter()
        .map(|&li| GaussJacobi::new(m, 0.0, n as f64 - 2.0 - li))
        .collect::<Result<_, _>>()?;
    // map nodes to [0,1] once; per-axis prefactor 2^{-(b+1)}
    let mapped: Vec<Vec<f64>> = rules
        .iter()
        .map(|r| r.nodes.iter().map(|&x| 0.5 * (x + 1.0)).collect())
        .collect();
    let prefactor: f64 = rules
        .iter()
        .map(|r| 2f64.powf(-(r.b + 1.0)))
        .product();
    let mut t = vec![0.0; n];
    let mut total = 0.0;
    let mut idx = vec![0usize; n];
    'outer: loop {
        let mut w = 1.0;
        for k in 0..n {
            t[k] = mapped[k][idx[k]];
            w *= rules[k].weights[idx[k]];
        }
        total += w * bracket_power(&t, ev.alpha(), power);
        // odometer over the tensor grid
        for k in 0..n {
            idx[k] += 1;
            if idx[k] < m {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(prefactor * total)
}

fn halton_direct(ev: &ExponentVector, power: f64, m: usize) -> f64 {
    let n = ev.n();
    let exponents: Vec<f64> = ev.l().iter().map(|&li| n as f64 - 1.0 - li).collect();
    let prefactor: f64 = exponents.iter().map(|e| 1.0 / e).product();
    let mut seq = Halton::new(n);
    let mut v = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut total = 0.0;
    for _ in 0..m {
        seq.next_point(&mut v);
        for k in 0..n {
            t[k] = v[k].powf(1.0 / exponents[k]);
        }
        total += bracket_power(&t, ev.alpha(), power);
    }
    prefactor * total / m as f64
}

/// Importance-sampled evaluation of the transformed constrained integral.
///
/// In the interior regime every coordinate uses an independent Gamma
/// proposal with the exact weight ratio between (1 - x/(N-n))^{N-n} and
/// exp(-x) (clipped to zero at x >= N-n), rejecting against the region.
/// With coordinates on the regime boundary the integrand carries s^{-1}
/// factors whose admissible range depends on the other coordinates; those
/// cases go through the permutation decomposition into ordered-region
/// integrals, where every nested range is exact.
pub fn j_transformed(
    ev: &ExponentVector,
    n_points: u64,
    samples: usize,
    seed: u64,
) -> Result<JEvalResult, EvalError> {
    let n = ev.n();
    if n_points <= n as u64 {
        return Err(EvalError::InvalidArgument(format!(
            "N = {n_points} must exceed n = {n}"
        )));
    }
    match ev.regime() {
        Regime::Interior => j_transformed_interior(ev, n_points, samples, seed),
        Regime::TwoExtremal | Regime::MultiStrict => {
            j_transformed_ordered(ev, n_points, samples, seed)
        }
        Regime::Invalid => Err(EvalError::WrongRegime(format!(
            "transformed route needs a valid regime: {}",
            ev.describe_violation()
        ))),
    }
}

fn j_transformed_interior(
    ev: &ExponentVector,
    n_points: u64,
    samples: usize,
    seed: u64,
) -> Result<JEvalResult, EvalError> {
    let n = ev.n();
    let m_run = (n_points - n as u64) as f64;
    let beta = ev.alpha() * m_run;
    let shapes = ev.gamma_shapes();
    let proposals: Vec<Gamma<f64>> = shapes
        .iter()
        .map(|&a| Gamma::new(a, 1.0).expect("positive shape"))
        .collect();
    let log_const: f64 = shapes.iter().map(|&a| ln_gamma(a)).sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![0.0; n];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let mut gamma_part = 0.0;
        let mut total_s = 0.0;
        for (sv, g) in s.iter_mut().zip(&proposals) {
            let v = g.sample(&mut rng);
            *sv = v;
            gamma_part += v;
            total_s += v;
        }
        let x = if total_s >= m_run || !region_member(&s, beta) {
            0.0
        } else {
            (log_const + gamma_part + m_run * (-total_s / m_run).ln_1p()).exp()
        };
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0) / samples as f64;
    let prefactor = beta.powf(ev.decay_exponent()) / (n as f64 - 1.0);
    Ok(JEvalResult {
        value: prefactor * mean,
        method: Method::Transformed,
        n_points,
        error_estimate: prefactor * var.sqrt(),
    })
}

/// Extremal regimes: sum the ordered-region integral over the distinct
/// permutations of the shifted exponents (each distinct ordering appears
/// prod multiplicity! times in the full permutation sum).
fn j_transformed_ordered(
    ev: &ExponentVector,
    n_points: u64,
    samples: usize,
    seed: u64,
) -> Result<JEvalResult, EvalError> {
    let n = ev.n();
    let m_run = (n_points - n as u64) as f64;
    let beta = ev.alpha() * m_run;
    let q: Vec<f64> = ev.gamma_shapes().iter().map(|a| a - 1.0).collect();
    let orderings = distinct_permutations(&q);
    let repeat_factor = {
        let mut sorted = q.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut f = 1.0f64;
        let mut run = 1.0f64;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1.0;
                f *= run;
            } else {
                run = 1.0;
            }
        }
        f
    };
    let per_perm = (samples / orderings.len()).max(10_000);
    let mut value = 0.0;
    let mut var = 0.0;
    for (i, ordering) in orderings.iter().enumerate() {
        let (v, e) = ordered_region_mc(ordering, beta, m_run, per_perm, seed.wrapping_add(i as u64));
        value += v;
        var += e * e;
    }
    let prefactor = beta.powf(ev.decay_exponent()) / (n as f64 - 1.0) * repeat_factor;
    Ok(JEvalResult {
        value: prefactor * value,
        method: Method::Transformed,
        n_points,
        error_estimate: prefactor * var.sqrt(),
    })
}

fn distinct_permutations(values: &[f64]) -> Vec<Vec<f64>> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(values.len());
    let mut used = vec![false; values.len()];
    fn recurse(
        sorted: &[f64],
        used: &mut [bool],
        current: &mut Vec<f64>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if current.len() == sorted.len() {
            out.push(current.clone());
            return;
        }
        let mut last: Option<f64> = None;
        for i in 0..sorted.len() {
            if used[i] || last == Some(sorted[i]) {
                continue;
            }
            last = Some(sorted[i]);
            used[i] = true;
            current.push(sorted[i]);
            recurse(sorted, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    recurse(&sorted, &mut used, &mut current, &mut out);
    out
}

/// Closed-form leading term, valid only in the interior regime:
/// alpha^{-n+L/(n-1)} (n-1)^{-1} prod Gamma(l_i - L/(n-1) + 1) N^{-n+L/(n-1)}.
/// The error estimate is the relative order N^{-(min_k l_k - L/(n-1) + 1)/(n-2)}.
pub fn j_asymptotic(ev: &ExponentVector, n_points: u64) -> Result<JEvalResult, EvalError> {
    if ev.regime() != Regime::Interior {
        return Err(EvalError::WrongRegime(format!(
            "leading term needs the interior regime: {}",
            ev.describe_violation()
        )));
    }
    let n = n_points as f64;
    let exponent = ev.decay_exponent();
    let gamma_product: f64 = ev.gamma_shapes().iter().map(|&a| gamma(a)).product();
    let value = ev.alpha().powf(exponent) * gamma_product / (ev.n() as f64 - 1.0)
        * n.powf(exponent);
    Ok(JEvalResult {
        value,
        method: Method::AsymptoticLeading,
        n_points,
        error_estimate: n.powf(-ev.interior_error_rate()),
    })
}

/// Fit of the extremal-regime shape c * N^{-n+L/(n-1)} (ln N)^p across an
/// N-grid, with p pinned to the regime prediction (n-2 when exactly two
/// exponents are strict, n-3 otherwise). The free-p diagnostic reports which
/// integer power fits the data best.
#[derive(Debug, Clone)]
pub struct LogRegimeFit {
    pub exponent: f64,
    pub log_power: i32,
    pub fitted_constant: f64,
    /// Integer power among {p-1, p, p+1} with the smallest residual.
    pub preferred_power: i32,
    /// (power, weighted residual sum) for the diagnostic fits.
    pub residuals: Vec<(i32, f64)>,
    pub evaluations: Vec<JEvalResult>,
}

pub fn j_log_regime(
    ev: &ExponentVector,
    n_grid: &[u64],
    samples: usize,
    seed: u64,
) -> Result<LogRegimeFit, EvalError> {
    match ev.regime() {
        Regime::TwoExtremal | Regime::MultiStrict => {}
        Regime::Interior => {
            return Err(EvalError::WrongRegime(
                "interior regime has a pure power law; use the closed-form leading term".into(),
            ))
        }
        Regime::Invalid => {
            return Err(EvalError::WrongRegime(ev.describe_violation()));
        }
    }
    if n_grid.len() < 4 {
        return Err(EvalError::GridTooSmall {
            needed: 4,
            got: n_grid.len(),
        });
    }
    let predicted = match ev.regime() {
        Regime::TwoExtremal => ev.n() as i32 - 2,
        _ => ev.n() as i32 - 3,
    };
    let exponent = ev.decay_exponent();
    let mut evaluations = Vec::with_capacity(n_grid.len());
    for (i, &n_points) in n_grid.iter().enumerate() {
        evaluations.push(j_transformed(ev, n_points, samples, seed.wrapping_add(i as u64))?);
    }
    // scaled values y = J * N^{n - L/(n-1)} should follow c (ln N)^p
    let scaled: Vec<(f64, f64, f64)> = evaluations
        .iter()
        .map(|r| {
            let scale = (r.n_points as f64).powf(-exponent);
            ((r.n_points as f64).ln(), r.value * scale, r.error_estimate * scale)
        })
        .collect();
    let fit_power = |p: i32| -> (f64, f64) {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(ln_n, y, sig) in &scaled {
            let x = ln_n.powi(p);
            let w = if sig > 0.0 { 1.0 / (sig * sig) } else { 1.0 };
            num += w * x * y;
            den += w * x * x;
        }
        let c = num / den;
        let resid: f64 = scaled
            .iter()
            .map(|&(ln_n, y, sig)| {
                let w = if sig > 0.0 { 1.0 / (sig * sig) } else { 1.0 };
                let d = y - c * ln_n.powi(p);
                w * d * d
            })
            .sum();
        (c, resid)
    };
    let (fitted_constant, _) = fit_power(predicted);
    let mut residuals = Vec::new();
    for p in [predicted - 1, predicted, predicted + 1] {
        if p >= 0 {
            let (_, r) = fit_power(p);
            residuals.push((p, r));
        }
    }
    let preferred_power = residuals
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|&(p, _)| p)
        .unwrap_or(predicted);
    Ok(LogRegimeFit {
        exponent,
        log_power: predicted,
        fitted_constant,
        preferred_power,
        residuals,
        evaluations,
    })
}

/// Ordered-region integral with power weights: integration over
/// alpha(N-n) >= s_1 >= s_2 >= ... >= s_n >= 0 constrained by
/// (s_1...s_{i-1} / alpha(N-n))^{1/(i-2)} <= s_i for i >= 3, of
/// (1 - sum s / (N-n))^{N-n} prod s_i^{q_i}. Returns (value, stderr).
pub fn s_eval(
    q: &[f64],
    alpha: f64,
    n_points: u64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64), EvalError> {
    let n = q.len();
    if n < 3 {
        return Err(EvalError::InvalidArgument(
            "ordered-region integral needs at least three coordinates".into(),
        ));
    }
    let strict = q.iter().filter(|&&v| v > -1.0 + 1e-12).count();
    if q.iter().any(|&v| v < -1.0 - 1e-12) {
        return Err(EvalError::ExponentOutOfRange(
            "all q_i must be at least -1".into(),
        ));
    }
    if strict < 2 {
        return Err(EvalError::InvalidArgument(
            "need at least two q_i strictly above -1".into(),
        ));
    }
    if !(alpha > 0.0) || alpha > 1.0 / (2.0 * n as f64) + 1e-12 {
        return Err(EvalError::InvalidArgument(format!(
            "alpha must lie in (0, 1/(2n)] = (0, {:.6}], got {alpha}",
            1.0 / (2.0 * n as f64)
        )));
    }
    if n_points <= n as u64 {
        return Err(EvalError::InvalidArgument(format!(
            "N = {n_points} must exceed n = {n}"
        )));
    }
    let m_run = (n_points - n as u64) as f64;
    Ok(ordered_region_mc(q, alpha * m_run, m_run, samples, seed))
}

/// Sequential importance sampling of the ordered-region integral with power
/// weights. Every coordinate is drawn from its exact conditional range given
/// the earlier ones, with the polynomial factor absorbed by the proposal:
/// power-law inverse-CDF for q > -1, log-uniform for q = -1. Only the
/// coordinates whose range has no positive natural lower bound (positions 1
/// and 2 with q = -1) use a relative floor; the integrand mass below it is
/// polynomially small in the floor and far beneath the MC error.
fn ordered_region_mc(q: &[f64], beta: f64, m_run: f64, samples: usize, seed: u64) -> (f64, f64) {
    let n = q.len();
    const FLOOR: f64 = 1e-26;
    let is_minus_one: Vec<bool> = q.iter().map(|&v| (v + 1.0).abs() <= 1e-12).collect();
    let gamma1 = if is_minus_one[0] {
        None
    } else {
        Some(Gamma::new(q[0] + 1.0, 1.0).expect("positive shape"))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![0.0; n];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let mut log_w: f64;
        let mut total_s: f64;
        // first coordinate: Gamma proposal (weight Gamma(q+1) e^{s}) or
        // log-uniform on [beta*FLOOR, beta]
        match &gamma1 {
            Some(g) => {
                let v = g.sample(&mut rng);
                if v >= beta {
                    continue; // contributes zero
                }
                s[0] = v;
                log_w = ln_gamma(q[0] + 1.0) + v;
                total_s = v;
            }
            None => {
                let lo = beta * FLOOR;
                let v = (lo.ln() + rng.gen::<f64>() * (beta.ln() - lo.ln())).exp();
                s[0] = v;
                log_w = (beta.ln() - lo.ln()).ln();
                total_s = v;
            }
        }
        let mut prefix = s[0];
        let mut dead = false;
        for c in 1..n {
            let upper = s[c - 1];
            let lower = if c >= 2 {
                (prefix / beta).powf(1.0 / (c as f64 - 1.0))
            } else {
                0.0
            };
            if lower >= upper {
                dead = true;
                break;
            }
            if is_minus_one[c] {
                let lo = lower.max(upper * FLOOR);
                let v = (lo.ln() + rng.gen::<f64>() * (upper.ln() - lo.ln())).exp();
                s[c] = v;
                log_w += (upper.ln() - lo.ln()).ln();
            } else {
                let e = q[c] + 1.0;
                let (plo, phi) = (lower.powf(e), upper.powf(e));
                let v = (plo + rng.gen::<f64>() * (phi - plo)).powf(1.0 / e);
                s[c] = v;
                log_w += ((phi - plo) / e).ln();
            }
            total_s += s[c];
            prefix *= s[c];
        }
        if dead || total_s >= m_run {
            continue;
        }
        let x = (log_w + m_run * (-total_s / m_run).ln_1p()).exp();
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0) / samples as f64;
    (mean, var.sqrt())
}

/// S(q1, q2, ...) + S(q2, q1, ...): the symmetrized pair whose leading
/// (ln N)^{n-2} coefficient is the Gamma-product constant.
pub fn s_eval_symmetrized(
    q: &[f64],
    alpha: f64,
    n_points: u64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64), EvalError> {
    let (a, ea) = s_eval(q, alpha, n_points, samples, seed)?;
    let mut swapped = q.to_vec();
    swapped.swap(0, 1);
    let (b, eb) = s_eval(&swapped, alpha, n_points, samples, seed.wrapping_add(0x9e37_79b9))?;
    Ok((a + b, (ea * ea + eb * eb).sqrt()))
}
