//! Gauss-Jacobi quadrature with endpoint weight (1-x)^a (1+x)^b.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix, located by
//! Sturm-sequence bisection; weights come from the Christoffel function
//! evaluated with the orthonormal three-term recurrence. No eigenvector
//! machinery needed, and everything is testable against exact moments.

use crate::special::ln_gamma;
use crate::EvalError;

#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn new(m: usize, a: f64, b: f64) -> Result<Self, EvalError> {
        if m < 2 {
            return Err(EvalError::InvalidArgument("need at least 2 nodes".into()));
        }
        if a <= -1.0 || b <= -1.0 {
            return Err(EvalError::ExponentOutOfRange(format!(
                "Jacobi exponents must exceed -1, got a={a}, b={b}"
            )));
        }
        let (diag, off) = jacobi_matrix(m, a, b);
        let nodes = tridiag_eigenvalues(&diag, &off);
        let mu0 = (std::f64::consts::LN_2 * (a + b + 1.0) + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp();
        let weights = nodes
            .iter()
            .map(|&x| {
                let mut p_prev = 0.0;
                let mut p = 1.0 / mu0.sqrt();
                let mut sum = p * p;
                for k in 0..m - 1 {
                    let p_next = ((x - diag[k]) * p - if k > 0 { off[k - 1] * p_prev } else { 0.0 })
                        / off[k];
                    p_prev = p;
                    p = p_next;
                    sum += p * p;
                }
                1.0 / sum
            })
            .collect();
        Ok(GaussJacobi {
            a,
            b,
            nodes,
            weights,
        })
    }

    /// Integral over [0,1] of t^b f(t) dt. Requires the rule built with a = 0
    /// and the same endpoint exponent b.
    pub fn integrate_unit<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        debug_assert_eq!(self.a, 0.0);
        let scale = 2f64.powf(-(self.b + 1.0));
        scale
            * self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(0.5 * (x + 1.0)))
                .sum::<f64>()
    }
}

fn jacobi_matrix(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(m);
    let mut off = Vec::with_capacity(m - 1);
    diag.push((b - a) / (a + b + 2.0));
    for k in 1..m {
        let kf = k as f64;
        let denom = 2.0 * kf + a + b;
        diag.push((b * b - a * a) / (denom * (denom + 2.0)));
        let e2 = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
            / (denom * denom * (denom + 1.0) * (denom - 1.0));
        off.push(e2.sqrt());
    }
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for k in 1..diag.len() {
        let denom = if q == 0.0 { 1e-300 } else { q };
        q = diag[k] - x - off[k - 1] * off[k - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let m = diag.len();
    // Gershgorin bounds; Jacobi nodes live in (-1, 1) but stay generic
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..m {
        let r = if k > 0 { off[k - 1].abs() } else { 0.0 }
            + if k < m - 1 { off[k].abs() } else { 0.0 };
        lo = lo.min(diag[k] - r);
        hi = hi.max(diag[k] + r);
    }
    (0..m)
        .map(|k| {
            let mut a = lo;
            let mut b = hi;
            for _ in 0..120 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Halton low-discrepancy sequence in the given dimension (bases are the
/// first `dim` primes); index starts at 1 to avoid the origin.
pub struct Halton {
    bases: Vec<u64>,
    index: u64,
}

impl Halton {
    pub fn new(dim: usize) -> Self {
        const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
        assert!(dim <= PRIMES.len());
        Halton {
            bases: PRIMES[..dim].to_vec(),
            index: 0,
        }
    }

    pub fn next_point(&mut self, out: &mut [f64]) {
        self.index += 1;
        for (o, &base) in out.iter_mut().zip(&self.bases) {
            *o = radical_inverse(self.index, base);
        }
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut frac = 1.0 / base as f64;
    while i > 0 {
        inv += (i % base) as f64 * frac;
        i /= base;
        frac /= base as f64;
    }
    inv
}
