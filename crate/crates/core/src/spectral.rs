//! Perron–Frobenius eigenpairs of primitive nonnegative matrices by power iteration.
//!
//! The right vector is normalised to unit 1-norm and the left vector so that
//! `L · R = 1`.

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Target for `‖Mx − λx‖₁`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Iterations between stall checks.
    pub stall_window: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tolerance: 1e-12,
            max_iterations: 100_000,
            stall_window: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfEigenpair {
    pub lambda: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    /// Achieved `‖MR − λR‖₁`.
    pub residual: f64,
    pub iterations: usize,
}

pub fn pf_eigenpair(m: &RationalMatrix) -> Result<PfEigenpair> {
    pf_eigenpair_dense(&m.to_f64(), m.dim(), &PowerOptions::default())
}

/// Eigenpair of the row-major `dim × dim` matrix `entries`.
pub fn pf_eigenpair_dense(entries: &[f64], dim: usize, options: &PowerOptions) -> Result<PfEigenpair> {
    assert_eq!(entries.len(), dim * dim, "matrix must be square");
    if dim == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if entries.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidArgument("matrix has negative or non-finite entries".into()));
    }
    let (lambda, right, residual, right_iters) = power_iterate(
        |x, y| {
            for (i, yi) in y.iter_mut().enumerate() {
                let row = &entries[i * dim..(i + 1) * dim];
                *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
            }
        },
        dim,
        options,
    )?;
    let (_, mut left, _, left_iters) = power_iterate(
        |x, y| {
            y.iter_mut().for_each(|v| *v = 0.0);
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0.0 {
                    continue;
                }
                let row = &entries[i * dim..(i + 1) * dim];
                for (yj, a) in y.iter_mut().zip(row) {
                    *yj += a * xi;
                }
            }
        },
        dim,
        options,
    )?;
    if right.iter().chain(&left).any(|&x| !(x > 0.0)) {
        return Err(Error::NotPrimitive);
    }
    let dot: f64 = left.iter().zip(&right).map(|(l, r)| l * r).sum();
    left.iter_mut().for_each(|l| *l /= dot);
    Ok(PfEigenpair {
        lambda,
        right,
        left,
        residual,
        iterations: right_iters.max(left_iters),
    })
}

/// Returns `(λ, x, residual, iterations)` with `x ≥ 0`, `‖x‖₁ = 1`.
fn power_iterate(
    apply: impl Fn(&[f64], &mut [f64]),
    dim: usize,
    options: &PowerOptions,
) -> Result<(f64, Vec<f64>, f64, usize)> {
    let mut x = vec![1.0 / dim as f64; dim];
    let mut y = vec![0.0; dim];
    let mut checkpoint = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for iteration in 1..=options.max_iterations {
        apply(&x, &mut y);
        let lambda: f64 = y.iter().sum();
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NotPrimitive);
        }
        residual = y.iter().zip(&x).map(|(a, b)| (a - lambda * b).abs()).sum();
        if residual <= options.tolerance {
            return Ok((lambda, x, residual, iteration));
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / lambda;
        }
        if iteration % options.stall_window == 0 {
            if checkpoint - residual < 1e-16 * checkpoint {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    residual,
                });
            }
            checkpoint = residual;
        }
    }
    Err(Error::NoConvergence {
        iterations: options.max_iterations,
        residual,
    })
}
