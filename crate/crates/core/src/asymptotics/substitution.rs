//! The product/quotient change of variables behind the transformed integral:
//! forward and inverse maps, the constrained region in both characterizations,
//! and the closed-form Jacobian determinant.

use crate::EvalError;

/// forward_map_j(x) = prod_{i != j} x_i.
pub fn forward_map(x: &[f64]) -> Result<Vec<f64>, EvalError> {
    check_positive(x)?;
    let product: f64 = x.iter().product();
    // guard against cancellation for coordinates spanning many decades
    Ok(x.iter()
        .enumerate()
        .map(|(j, &xj)| {
            if xj != 0.0 && product != 0.0 {
                product / xj
            } else {
                x.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &v)| v)
                    .product()
            }
        })
        .collect())
}

/// inverse_map_i(y) = (prod y_k)^{1/(n-1)} / y_i.
pub fn inverse_map(y: &[f64]) -> Result<Vec<f64>, EvalError> {
    check_positive(y)?;
    let n = y.len();
    // work in logs: the geometric mean keeps the root well conditioned
    let log_sum: f64 = y.iter().map(|v| v.ln()).sum();
    let root = (log_sum / (n as f64 - 1.0)).exp();
    Ok(y.iter().map(|&yi| root / yi).collect())
}

/// Membership in the constrained region by the product inequalities:
/// prod y_k < beta * y_i^{n-1} for every i.
pub fn region_member(y: &[f64], beta: f64) -> bool {
    debug_assert!(beta > 0.0);
    let n = y.len() as i32;
    if y.iter().any(|&v| v <= 0.0) {
        return false;
    }
    let product: f64 = y.iter().product();
    y.iter().all(|&yi| product < beta * yi.powi(n - 1))
}

/// The same region by the sorted-chain characterization: with coordinates in
/// decreasing order x_1 > ... > x_n, require beta * x_i^{i-2} > x_1 ... x_{i-1}
/// for i = 3..n (plus x_1 < beta when n = 2, where the chain is empty).
pub fn region_member_chain(y: &[f64], beta: f64) -> bool {
    debug_assert!(beta > 0.0);
    if y.iter().any(|&v| v <= 0.0) {
        return false;
    }
    let mut x = y.to_vec();
    x.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if x.len() == 2 {
        return x[0] < beta;
    }
    let mut prefix = x[0] * x[1];
    for i in 3..=x.len() {
        if beta * x[i - 1].powi(i as i32 - 2) <= prefix {
            return false;
        }
        prefix *= x[i - 1];
    }
    true
}

/// |det d(inverse_map)/dy| = (n-1)^{-1} (prod y_k)^{-(n-2)/(n-1)}.
pub fn jacobian_det(v: &[f64]) -> Result<f64, EvalError> {
    check_positive(v)?;
    let n = v.len() as f64;
    let log_prod: f64 = v.iter().map(|x| x.ln()).sum();
    Ok((-(n - 2.0) / (n - 1.0) * log_prod).exp() / (n - 1.0))
}

/// det(ones matrix + diag(x)) = prod x_i + sum_i prod_{j != i} x_j.
pub fn det_ones_plus_diag(x: &[f64]) -> f64 {
    let product: f64 = x.iter().product();
    let cofactor_sum: f64 = (0..x.len())
        .map(|i| {
            x.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .product::<f64>()
        })
        .sum();
    product + cofactor_sum
}

fn check_positive(x: &[f64]) -> Result<(), EvalError> {
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(EvalError::InvalidArgument(
            "all coordinates must be strictly positive".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn forward_example_n3() {
        let y = forward_map(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![6.0, 3.0, 2.0]);
        let x = inverse_map(&[6.0, 3.0, 2.0]).unwrap();
        for (a, b) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_at_ones() {
        for n in 2..=6 {
            let ones = vec![1.0; n];
            assert_eq!(forward_map(&ones).unwrap(), ones);
            let back = inverse_map(&ones).unwrap();
            for v in back {
                assert!((v - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn roundtrip_on_random_boxes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in 2..=6 {
            for _ in 0..10_000 / n {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
                let back = inverse_map(&forward_map(&x).unwrap()).unwrap();
                for (a, b) in back.iter().zip(&x) {
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn region_examples() {
        assert!(region_member(&[0.5, 0.5, 0.5], 1.0));
        assert!(!region_member(&[0.9, 0.9, 0.01], 1.0));
    }

    #[test]
    fn characterizations_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 3..=5 {
            for _ in 0..30_000 {
                let beta = rng.gen_range(0.5..4.0);
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..2.0 * beta)).collect();
                assert_eq!(
                    region_member(&y, beta),
                    region_member_chain(&y, beta),
                    "y={y:?} beta={beta}"
                );
            }
        }
    }

    #[test]
    fn jacobian_examples() {
        assert!((jacobian_det(&[1.0, 1.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        // ones matrix + diag(1-n) has determinant (1-n)^{n-1}: n = 4 gives -27
        let x = vec![-3.0; 4];
        assert!((det_ones_plus_diag(&x) + 27.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [3usize, 5] {
            for _ in 0..50 {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
                let exact = jacobian_det(&v).unwrap();
                // numerical Jacobian of the inverse map
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
                let num = crate::linalg::det_in_place(&mut jac, n).abs();
                assert!(
                    (num - exact).abs() <= 1e-6 * exact,
                    "n={n} exact={exact} numeric={num}"
                );
            }
        }
    }

    #[test]
    fn nonpositive_coordinates_rejected() {
        assert!(forward_map(&[1.0, 0.0]).is_err());
        assert!(inverse_map(&[1.0, -2.0]).is_err());
        assert!(jacobian_det(&[0.0, 1.0]).is_err());
    }
}
