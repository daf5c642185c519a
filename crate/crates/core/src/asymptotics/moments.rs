//! Monte Carlo moments of random simplices on the boundary of the corner
//! simplex cut by a hyperplane, and a two-sided check of the hyperplane-to-
//! coordinates change of variables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg;
use crate::special::ln_gamma;
use crate::EvalError;

/// Monte Carlo estimate of the k-th moment
///
/// ```text
///   E_k(h, u) = int ... int over (bd R_+^n cap H(h,u))^n, not all points on
///               one facet, of vol_{n-1}([x_1..x_n])^k prod_j (1-u_{f_j}^2)^{-1/2}
/// ```
///
/// where each x_j lives on one of the n coordinate-hyperplane facets of the
/// cross-section simplex. Returns (value, stderr).
pub fn simplex_moment_mc(
    k: u32,
    h: f64,
    u: &[f64],
    samples: usize,
    seed: u64,
) -> Result<(f64, f64), EvalError> {
    let n = u.len();
    if n < 2 {
        return Err(EvalError::InvalidArgument("need dimension >= 2".into()));
    }
    if u.iter().any(|&x| x <= 0.0) {
        return Err(EvalError::InvalidArgument(
            "direction must have strictly positive coordinates".into(),
        ));
    }
    if (linalg::norm(u) - 1.0).abs() > 1e-9 {
        return Err(EvalError::InvalidArgument("direction must be a unit vector".into()));
    }
    if !(h > 0.0) {
        return Err(EvalError::InvalidArgument("h must be positive".into()));
    }

    // cross-section simplex has vertices (h/u_i) e_i; facet i is the
    // (n-2)-simplex on the vertices with j != i
    let verts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = h / u[i];
            v
        })
        .collect();
    let mut facet_meas = Vec::with_capacity(n);
    for i in 0..n {
        let refs: Vec<&[f64]> = (0..n).filter(|&j| j != i).map(|j| verts[j].as_slice()).collect();
        facet_meas.push(linalg::simplex_volume(&refs));
    }
    let total: f64 = facet_meas.iter().sum();
    let cdf: Vec<f64> = facet_meas
        .iter()
        .scan(0.0, |acc, &m| {
            *acc += m / total;
            Some(*acc)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![0usize; n];
    let mut pts = vec![vec![0.0; n]; n];
    let mut cuts = vec![0.0; n.saturating_sub(2)];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        for j in 0..n {
            let r: f64 = rng.gen();
            let f = cdf.partition_point(|&c| c <= r).min(n - 1);
            chosen[j] = f;
            // uniform point of facet f via sorted-uniform spacings over its
            // n-1 vertices
            for c in cuts.iter_mut() {
                *c = rng.gen();
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ids: Vec<usize> = (0..n).filter(|&i| i != f).collect();
            let p = &mut pts[j];
            p.iter_mut().for_each(|x| *x = 0.0);
            let mut prev = 0.0;
            for (idx, &vid) in ids.iter().enumerate() {
                let next = if idx + 1 < ids.len() { cuts[idx] } else { 1.0 };
                let w = next - prev;
                prev = next;
                for c in 0..n {
                    p[c] += w * verts[vid][c];
                }
            }
        }
        let first = chosen[0];
        let all_same = chosen.iter().all(|&f| f == first);
        let x = if all_same {
            0.0
        } else {
            let mut weight = 1.0;
            for &f in &chosen {
                weight *= 1.0 / (1.0 - u[f] * u[f]).sqrt();
            }
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            let vol = linalg::simplex_volume(&refs);
            weight * vol.powi(k as i32)
        };
        sum += x;
        sum_sq += x * x;
    }
    let scale = total.powi(n as i32);
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0) / samples as f64;
    Ok((scale * mean, scale * var.sqrt()))
}

/// Integrable separable test functions for the change-of-variables check.
#[derive(Debug, Clone)]
pub enum CrucialTestFn {
    /// f(t) = prod t_i^{a_i} exp(-t_i); both sides finite iff all a_i > 1.
    GammaProduct { exponents: Vec<f64> },
    /// f(t) = (1 - a sum_i prod_{j != i} t_j)^{power} * prod t_i^{p_i} on the
    /// unit box (the integrand shape produced by the substitution in the
    /// facet-count computation); finite iff all p_i > 1.
    BoxPower {
        a: f64,
        power: f64,
        exponents: Vec<f64>,
    },
}

impl CrucialTestFn {
    fn dim(&self) -> usize {
        match self {
            CrucialTestFn::GammaProduct { exponents } => exponents.len(),
            CrucialTestFn::BoxPower { exponents, .. } => exponents.len(),
        }
    }

    fn check_integrable(&self) -> Result<(), EvalError> {
        match self {
            CrucialTestFn::GammaProduct { exponents } => {
                if let Some((i, &a)) = exponents
                    .iter()
                    .enumerate()
                    .find(|&(_, &a)| a <= 1.0)
                {
                    return Err(EvalError::Divergent(format!(
                        "coordinate {} has exponent {} <= 1, the t^{{-2}} side diverges",
                        i + 1,
                        a
                    )));
                }
                Ok(())
            }
            CrucialTestFn::BoxPower { exponents, .. } => {
                if let Some((i, &p)) = exponents
                    .iter()
                    .enumerate()
                    .find(|&(_, &p)| p <= 1.0)
                {
                    return Err(EvalError::Divergent(format!(
                        "coordinate {} has exponent {} <= 1, the t^{{-2}} side diverges",
                        i + 1,
                        p
                    )));
                }
                Ok(())
            }
        }
    }

    fn eval(&self, t: &[f64]) -> f64 {
        match self {
            CrucialTestFn::GammaProduct { exponents } => {
                let mut log_v = 0.0;
                for (&x, &a) in t.iter().zip(exponents) {
                    log_v += a * x.ln() - x;
                }
                log_v.exp()
            }
            CrucialTestFn::BoxPower { a, power, exponents } => {
                if t.iter().any(|&x| x > 1.0) {
                    return 0.0;
                }
                let mut cof = 0.0;
                for i in 0..t.len() {
                    let mut p = 1.0;
                    for (j, &v) in t.iter().enumerate() {
                        if j != i {
                            p *= v;
                        }
                    }
                    cof += p;
                }
                let base = 1.0 - a * cof;
                if base <= 0.0 {
                    return 0.0;
                }
                let mut log_v = power * base.ln();
                for (&x, &p) in t.iter().zip(exponents) {
                    log_v += p * x.ln();
                }
                log_v.exp()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubstCheckResult {
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub rhs_stderr: f64,
}

impl SubstCheckResult {
    pub fn agrees_within(&self, sigmas: f64) -> bool {
        let tol = sigmas * (self.lhs_stderr.powi(2) + self.rhs_stderr.powi(2)).sqrt();
        (self.lhs - self.rhs).abs() <= tol
    }
}

/// Two-sided Monte Carlo of the identity
///
/// ```text
///   int_{S_+^{n-1}} int_{R_+} f(h/u_1, ..., h/u_n) h^{-(n+1)} dh du
///     = int_{R_+^n} f(t) prod t_i^{-2} dt .
/// ```
pub fn crucial_subst_check(
    test_fn: &CrucialTestFn,
    samples: usize,
    seed: u64,
) -> Result<SubstCheckResult, EvalError> {
    test_fn.check_integrable()?;
    let n = test_fn.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // right side: t_i = x_i / (1 - x_i) turns it into
    // int over (0,1)^n of f(t(x)) prod x_i^{-2} dx
    let mut rhs_sum = 0.0;
    let mut rhs_sq = 0.0;
    let mut t = vec![0.0; n];
    for _ in 0..samples {
        let mut log_w = 0.0;
        for tv in t.iter_mut() {
            let x: f64 = rng.gen();
            *tv = x / (1.0 - x);
            log_w += -2.0 * x.ln();
        }
        let v = test_fn.eval(&t) * log_w.exp();
        rhs_sum += v;
        rhs_sq += v * v;
    }

    // left side: u uniform on the positive orthant of the sphere (absolute
    // normal Gaussian), h = y / (1 - y) with the Jacobian (1-y)^{-2}
    let orthant_measure = {
        // |S^{n-1}| / 2^n
        let full = 2.0 * (std::f64::consts::PI.ln() * (n as f64 / 2.0)).exp()
            / ln_gamma(n as f64 / 2.0).exp();
        full / 2f64.powi(n as i32)
    };
    let mut lhs_sum = 0.0;
    let mut lhs_sq = 0.0;
    let mut u = vec![0.0; n];
    for _ in 0..samples {
        loop {
            let mut norm2 = 0.0;
            for uv in u.iter_mut() {
                let g: f64 = rng.sample(rand_distr::StandardNormal);
                *uv = g.abs();
                norm2 += *uv * *uv;
            }
            if norm2 > 1e-12 {
                let inv = norm2.sqrt().recip();
                u.iter_mut().for_each(|x| *x *= inv);
                break;
            }
        }
        let y: f64 = rng.gen();
        let h = y / (1.0 - y);
        for (tv, &uv) in t.iter_mut().zip(u.iter()) {
            *tv = h / uv;
        }
        let v = test_fn.eval(&t) * h.powi(-(n as i32 + 1)) / ((1.0 - y) * (1.0 - y));
        lhs_sum += v;
        lhs_sq += v * v;
    }

    let m = samples as f64;
    let rhs = rhs_sum / m;
    let rhs_var = (rhs_sq / m - rhs * rhs).max(0.0) / m;
    let lhs_mean = lhs_sum / m;
    let lhs_var = (lhs_sq / m - lhs_mean * lhs_mean).max(0.0) / m;
    Ok(SubstCheckResult {
        lhs: orthant_measure * lhs_mean,
        lhs_stderr: orthant_measure * lhs_var.sqrt(),
        rhs,
        rhs_stderr: rhs_var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_positive_and_symmetric() {
        let s = 1.0 / 3f64.sqrt();
        let u = [s, s, s];
        let (v0, e0) = simplex_moment_mc(0, 1.0, &u, 100_000, 1).unwrap();
        assert!(v0 > 0.0 && v0.is_finite());
        assert!(e0 < 0.02 * v0);
        // permuting a symmetric direction changes nothing statistically
        let (v1, e1) = simplex_moment_mc(1, 1.0, &u, 100_000, 2).unwrap();
        let (v2, e2) = simplex_moment_mc(1, 1.0, &[s, s, s], 100_000, 3).unwrap();
        assert!((v1 - v2).abs() <= 3.0 * (e1 * e1 + e2 * e2).sqrt());
    }

    #[test]
    fn moment_homogeneity_in_h() {
        // E_k(2h, u) / E_k(h, u) = 2^{(n-1)k + n(n-2)}; n = 3, k = 1 gives 2^5
        let u = {
            let mut u = vec![0.5, 0.6, 0.7];
            let nn = linalg::norm(&u);
            u.iter_mut().for_each(|x| *x /= nn);
            u
        };
        let (v1, e1) = simplex_moment_mc(1, 0.1, &u, 400_000, 11).unwrap();
        let (v2, e2) = simplex_moment_mc(1, 0.2, &u, 400_000, 12).unwrap();
        let ratio = v2 / v1;
        let sigma = ratio * ((e1 / v1).powi(2) + (e2 / v2).powi(2)).sqrt();
        assert!(
            (ratio - 32.0).abs() <= 3.0 * sigma,
            "ratio {ratio} +- {sigma}"
        );
    }

    #[test]
    fn degenerate_direction_rejected() {
        assert!(simplex_moment_mc(1, 1.0, &[1.0, 0.0, 0.0], 100, 1).is_err());
    }

    #[test]
    fn subst_check_gamma_product() {
        // f(t) = prod t^2 e^{-t}: rhs = Gamma(1)^3 = 1 exactly
        let f = CrucialTestFn::GammaProduct {
            exponents: vec![2.0, 2.0, 2.0],
        };
        let r = crucial_subst_check(&f, 2_000_000, 5).unwrap();
        assert!(r.agrees_within(3.0), "lhs {} rhs {}", r.lhs, r.rhs);
        assert!((r.rhs - 1.0).abs() <= 4.0 * r.rhs_stderr, "rhs {}", r.rhs);
    }

    #[test]
    fn subst_check_divergence_gate() {
        let f = CrucialTestFn::GammaProduct {
            exponents: vec![0.0, 0.0],
        };
        assert!(matches!(
            crucial_subst_check(&f, 100, 1),
            Err(EvalError::Divergent(_))
        ));
    }
}
