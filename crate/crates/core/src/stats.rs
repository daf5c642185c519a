//! Summary statistics and the handful of hypothesis tests the check suites use.

use crate::special::chi_square_sf;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n-1 denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0);
    var.max(0.0).sqrt()
}

/// Standard error of the mean.
pub fn stderr_of_mean(xs: &[f64]) -> f64 {
    sample_sd(xs) / (xs.len() as f64).sqrt()
}

/// Weighted least squares line y = intercept + slope * x.
/// Weights are 1/sigma_i^2; returns (slope, intercept, slope_stderr, r_squared).
pub fn wls_line(x: &[f64], y: &[f64], sigma: &[f64]) -> (f64, f64, f64, f64) {
    assert!(x.len() == y.len() && y.len() == sigma.len() && x.len() >= 2);
    let w: Vec<f64> = sigma
        .iter()
        .map(|s| if *s > 0.0 { 1.0 / (s * s) } else { 1.0 })
        .collect();
    let sw: f64 = w.iter().sum();
    let xbar = x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let ybar = y.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(&w).map(|(a, b)| b * (a - xbar) * (a - xbar)).sum();
    let sxy: f64 = x
        .iter()
        .zip(y)
        .zip(&w)
        .map(|((a, c), b)| b * (a - xbar) * (c - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let slope_stderr = (1.0 / sxx).sqrt();
    // r^2 against the weighted mean
    let ss_tot: f64 = y.iter().zip(&w).map(|(c, b)| b * (c - ybar) * (c - ybar)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .zip(&w)
        .map(|((a, c), b)| {
            let fit = intercept + slope * a;
            b * (c - fit) * (c - fit)
        })
        .sum();
    let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    (slope, intercept, slope_stderr, r2)
}

/// Kolmogorov-Smirnov statistic of a sample against Uniform[0,1].
pub fn ks_statistic_uniform(sample: &mut [f64]) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sample.iter().enumerate() {
        let lo = (x - i as f64 / n).abs();
        let hi = ((i as f64 + 1.0) / n - x).abs();
        d = d.max(lo).max(hi);
    }
    d
}

/// Asymptotic KS critical value at significance `alpha` for sample size n.
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Chi-square goodness-of-fit p-value for observed counts against expected
/// proportions (which must sum to one).
pub fn chi_square_gof_pvalue(observed: &[u64], proportions: &[f64]) -> f64 {
    assert_eq!(observed.len(), proportions.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    for (o, p) in observed.iter().zip(proportions) {
        let e = total as f64 * p;
        stat += (*o as f64 - e) * (*o as f64 - e) / e;
    }
    chi_square_sf(stat, observed.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wls_recovers_exact_line() {
        let x: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 1.5 * v).collect();
        let s = vec![0.1; 8];
        let (slope, intercept, _, r2) = wls_line(&x, &y, &s);
        assert!((slope + 1.5).abs() < 1e-12);
        assert!((intercept - 3.0).abs() < 1e-12);
        assert!(r2 > 1.0 - 1e-12);
    }

    #[test]
    fn wls_weights_matter() {
        // outlier with huge sigma should barely move the fit
        let x = vec![0.0, 1.0, 2.0, 3.0];
        let y = vec![0.0, 1.0, 2.0, 100.0];
        let s = vec![1e-3, 1e-3, 1e-3, 1e6];
        let (slope, _, _, _) = wls_line(&x, &y, &s);
        assert!((slope - 1.0).abs() < 1e-3);
    }

    #[test]
    fn ks_of_perfect_grid_is_small() {
        let n = 10_000;
        let mut grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic_uniform(&mut grid);
        assert!(d <= 0.5 / n as f64 + 1e-12);
    }

    #[test]
    fn chi_square_detects_skew() {
        let fair = chi_square_gof_pvalue(&[250, 250, 250, 250], &[0.25; 4]);
        assert!(fair > 0.9);
        let skewed = chi_square_gof_pvalue(&[400, 200, 200, 200], &[0.25; 4]);
        assert!(skewed < 1e-6);
    }
}
