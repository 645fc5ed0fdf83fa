//! Simultaneous root finding by the Aberth–Ehrlich iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(z)| / Σ |a_k| |z|^k`, the backward-error style residual.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = eval_with_derivative(coeffs, z);
    let r = z.norm();
    let scale = coeffs
        .iter()
        .rev()
        .fold(0.0, |acc: f64, c| acc * r + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of the polynomial with coefficients `coeffs` (lowest degree
/// first). Intended for square-free inputs; every root is certified with a
/// relative residual below `residual_tol`.
pub fn aberth_roots(coeffs: &[Complex64], residual_tol: f64) -> Result<Vec<Complex64>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if n == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }

    // Fujiwara-type radius for the initial circle
    let radius = (0..n)
        .map(|k| (coeffs[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // Newton polish; keep the better of the polished and unpolished values.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&coeffs, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *zi - p / dp;
            if cand.is_finite() && relative_residual(&coeffs, cand) <= relative_residual(&coeffs, *zi) {
                *zi = cand;
            } else {
                break;
            }
        }
    }

    let worst = z
        .iter()
        .map(|&zi| relative_residual(&coeffs, zi))
        .fold(0.0, f64::max);
    if worst >= residual_tol {
        return Err(Error::NoConvergence {
            achieved: worst,
            target: residual_tol,
        });
    }
    Ok(z)
}
