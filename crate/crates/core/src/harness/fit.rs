//! Scaling-law fits: power laws on log-log axes and log-power models with a
//! free intercept (the intercept absorbs the next-order correction term).

use serde::{Deserialize, Serialize};

use crate::stats::wls_line;
use crate::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// value ~ c * N^s
    PowerLaw,
    /// value ~ c * (ln N)^p + b
    LogPower,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// Slope s for the power law, the fixed integer power p for log-power.
    pub exponent_or_power: f64,
    /// Multiplicative constant c.
    pub constant: f64,
    /// Standard error of the fitted slope/constant.
    pub stderr: f64,
    pub r_squared: f64,
}

/// One aggregated grid point: (N, mean, standard error of the mean).
pub type GridPoint = (u64, f64, f64);

/// Weighted least squares of ln(mean) against ln(N).
pub fn fit_power_law(points: &[GridPoint]) -> Result<FitResult, EvalError> {
    if points.len() < 4 {
        return Err(EvalError::GridTooSmall {
            needed: 4,
            got: points.len(),
        });
    }
    if let Some((n, m, _)) = points.iter().find(|(_, m, _)| *m <= 0.0) {
        return Err(EvalError::InvalidArgument(format!(
            "nonpositive mean {m} at N = {n} cannot enter a log-log fit"
        )));
    }
    let x: Vec<f64> = points.iter().map(|(n, _, _)| (*n as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|(_, m, _)| m.ln()).collect();
    // delta ln(m) = stderr / m
    let sigma: Vec<f64> = points
        .iter()
        .map(|(_, m, s)| if *s > 0.0 { s / m } else { 1e-6 })
        .collect();
    let (slope, intercept, slope_se, r2) = wls_line(&x, &y, &sigma);
    Ok(FitResult {
        model: FitModel::PowerLaw,
        exponent_or_power: slope,
        constant: intercept.exp(),
        stderr: slope_se,
        r_squared: r2,
    })
}

/// Weighted least squares of mean against (ln N)^p with a free intercept.
pub fn fit_log_power(points: &[GridPoint], p: u32) -> Result<FitResult, EvalError> {
    if points.len() < 4 {
        return Err(EvalError::GridTooSmall {
            needed: 4,
            got: points.len(),
        });
    }
    let x: Vec<f64> = points
        .iter()
        .map(|(n, _, _)| (*n as f64).ln().powi(p as i32))
        .collect();
    let y: Vec<f64> = points.iter().map(|(_, m, _)| *m).collect();
    let sigma: Vec<f64> = points
        .iter()
        .map(|(_, _, s)| if *s > 0.0 { *s } else { 1e-9 })
        .collect();
    let (slope, _intercept, slope_se, r2) = wls_line(&x, &y, &sigma);
    Ok(FitResult {
        model: FitModel::LogPower,
        exponent_or_power: p as f64,
        constant: slope,
        stderr: slope_se,
        r_squared: r2,
    })
}

/// Free-p diagnostic: the integer power in 1..=max_p whose log-power fit has
/// the smallest weighted residual. Returns (best_p, residuals per power).
pub fn preferred_log_power(points: &[GridPoint], max_p: u32) -> Result<(u32, Vec<(u32, f64)>), EvalError> {
    if points.len() < 4 {
        return Err(EvalError::GridTooSmall {
            needed: 4,
            got: points.len(),
        });
    }
    let mut residuals = Vec::new();
    for p in 1..=max_p {
        let x: Vec<f64> = points
            .iter()
            .map(|(n, _, _)| (*n as f64).ln().powi(p as i32))
            .collect();
        let y: Vec<f64> = points.iter().map(|(_, m, _)| *m).collect();
        let sigma: Vec<f64> = points
            .iter()
            .map(|(_, _, s)| if *s > 0.0 { *s } else { 1e-9 })
            .collect();
        let (slope, intercept, _, _) = wls_line(&x, &y, &sigma);
        let ssr: f64 = x
            .iter()
            .zip(&y)
            .zip(&sigma)
            .map(|((xv, yv), s)| {
                let d = yv - (intercept + slope * xv);
                d * d / (s * s)
            })
            .sum();
        residuals.push((p, ssr));
    }
    let best = residuals
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|&(p, _)| p)
        .expect("nonempty");
    Ok((best, residuals))
}
