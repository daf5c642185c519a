//! Numerical evaluation of the constrained box integrals whose large-N
//! behaviour drives the facet-count and missed-volume laws, together with
//! the substitution algebra connecting the direct and transformed routes,
//! boundary-simplex moment estimation, and the ordered-region integrals
//! with logarithmic growth.

mod integrals;
mod moments;
pub mod quadrature;
pub mod substitution;

pub use integrals::{
    j_asymptotic, j_direct, j_log_regime, j_transformed, s_eval, s_eval_symmetrized, LogRegimeFit,
};
pub use moments::{crucial_subst_check, simplex_moment_mc, CrucialTestFn, SubstCheckResult};
pub use substitution::{
    det_ones_plus_diag, forward_map, inverse_map, jacobian_det, region_member,
    region_member_chain,
};

use crate::EvalError;
use serde::Serialize;

/// Which values of the exponent tuple sit on the boundary l_i = L/(n-1) - 1
/// decides the large-N shape of the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// All exponents strictly above the boundary: pure power law with a
    /// Gamma-product constant.
    Interior,
    /// Exactly two strict, the rest on the boundary: an extra (ln N)^{n-2}.
    TwoExtremal,
    /// At least three strict with some on the boundary: at most (ln N)^{n-3}.
    MultiStrict,
    /// Some exponent below the boundary (or other constraint violations).
    Invalid,
}

/// Exponent tuple for the box integral, with its regime classification.
#[derive(Debug, Clone)]
pub struct ExponentVector {
    l: Vec<f64>,
    total: f64,
    alpha: f64,
    regime: Regime,
    extremal: Vec<bool>,
}

impl ExponentVector {
    /// Classifies `l`. Exponents must stay below n-1 (integrability) and
    /// alpha must be positive. Boundary detection is exact when all l_i are
    /// integers, otherwise a 1e-12 relative tolerance applies.
    pub fn new(l: Vec<f64>, alpha: f64) -> Result<Self, EvalError> {
        let n = l.len();
        if n < 2 {
            return Err(EvalError::InvalidArgument(
                "need at least two exponents".into(),
            ));
        }
        if !(alpha > 0.0) {
            return Err(EvalError::InvalidArgument("alpha must be positive".into()));
        }
        let total: f64 = l.iter().sum();
        for (i, &li) in l.iter().enumerate() {
            if !(li < n as f64 - 1.0) {
                return Err(EvalError::ExponentOutOfRange(format!(
                    "l_{} = {} must be below n-1 = {} for the integral to be finite",
                    i + 1,
                    li,
                    n - 1
                )));
            }
        }

        let all_integers = l.iter().all(|x| x.fract() == 0.0 && x.abs() < 2.0f64.powi(40));
        let mut extremal = vec![false; n];
        let mut below = false;
        if all_integers {
            // compare (n-1) l_i against L - (n-1) in exact integer arithmetic
            let li: Vec<i64> = l.iter().map(|&x| x as i64).collect();
            let sum: i64 = li.iter().sum();
            for (i, &v) in li.iter().enumerate() {
                let lhs = (n as i64 - 1) * v;
                let rhs = sum - (n as i64 - 1);
                if lhs == rhs {
                    extremal[i] = true;
                } else if lhs < rhs {
                    below = true;
                }
            }
        } else {
            let tol = 1e-12 * total.abs().max(1.0);
            let boundary = total / (n as f64 - 1.0) - 1.0;
            for (i, &v) in l.iter().enumerate() {
                if (v - boundary).abs() <= tol {
                    extremal[i] = true;
                } else if v < boundary {
                    below = true;
                }
            }
        }

        let strict = extremal.iter().filter(|&&e| !e).count();
        let regime = if below {
            Regime::Invalid
        } else if strict == n {
            Regime::Interior
        } else if strict == 2 {
            Regime::TwoExtremal
        } else if strict >= 3 {
            Regime::MultiStrict
        } else {
            Regime::Invalid
        };

        Ok(ExponentVector {
            l,
            total,
            alpha,
            regime,
            extremal,
        })
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }
    pub fn l(&self) -> &[f64] {
        &self.l
    }
    pub fn total(&self) -> f64 {
        self.total
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn regime(&self) -> Regime {
        self.regime
    }
    pub fn extremal(&self) -> &[bool] {
        &self.extremal
    }

    /// The power of N in the leading term: -n + L/(n-1).
    pub fn decay_exponent(&self) -> f64 {
        -(self.n() as f64) + self.total / (self.n() as f64 - 1.0)
    }

    /// Gamma shapes of the transformed integrand: l_i - L/(n-1) + 1
    /// (exactly zero on flagged extremal coordinates).
    pub fn gamma_shapes(&self) -> Vec<f64> {
        let boundary = self.total / (self.n() as f64 - 1.0) - 1.0;
        self.l
            .iter()
            .zip(&self.extremal)
            .map(|(&v, &e)| if e { 0.0 } else { v - boundary })
            .collect()
    }

    /// Relative error order of the interior leading term:
    /// N^{-(min_k l_k - L/(n-1) + 1)/(n-2)}.
    pub fn interior_error_rate(&self) -> f64 {
        let min_shape = self
            .gamma_shapes()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        min_shape / (self.n() as f64 - 2.0)
    }

    /// Human-readable description of why the interior regime is violated,
    /// naming the first offending coordinate.
    pub fn describe_violation(&self) -> String {
        let boundary = self.total / (self.n() as f64 - 1.0) - 1.0;
        for (i, &e) in self.extremal.iter().enumerate() {
            if e {
                return format!("l_{} = L/(n-1) - 1 = {}", i + 1, boundary);
            }
        }
        for (i, &v) in self.l.iter().enumerate() {
            if v < boundary {
                return format!("l_{} = {} < L/(n-1) - 1 = {}", i + 1, v, boundary);
            }
        }
        "no violation".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Transformed,
    AsymptoticLeading,
    LogRegimeShape,
}

/// One evaluation of the box integral.
#[derive(Debug, Clone, Serialize)]
pub struct JEvalResult {
    pub value: f64,
    pub method: Method,
    #[serde(rename = "N")]
    pub n_points: u64,
    pub error_estimate: f64,
}
