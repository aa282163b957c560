use serde::{Deserialize, Serialize};

use super::log_sum_exp;
use crate::error::{Error, Result};
use crate::matrix::{ComparisonMatrix, Scale};
use crate::ranking::{Normalization, ScoreVector};

/// Stopping rule for power iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerOptions {
    /// Bound on the max-norm change of the log iterate and on the relative
    /// eigen-residual, scaled by `max(1, max |log entry|)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

/// Perron eigenpair of a positive matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronSolution {
    pub eigenvalue: f64,
    /// Multiplicative, first component one.
    pub eigenvector: ScoreVector,
    pub iterations: usize,
    /// `max_i |(Xv)_i / (eigenvalue * v_i) - 1|`.
    pub residual: f64,
}

/// Perron eigenpair of a Hadamard power `X^(k)`, kept in log form so that
/// large `k` neither overflows nor underflows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HadamardPerron {
    pub k: f64,
    /// `ln v` with the first component zero.
    pub log_scores: Vec<f64>,
    /// `ln` of the Perron value of `X^(k)`.
    pub log_eigenvalue: f64,
    pub iterations: usize,
    pub residual: f64,
}

impl HadamardPerron {
    /// `v` with first component one. Components may underflow to zero for
    /// large `k`; use `log_scores` when that matters.
    pub fn normalized(&self) -> Vec<f64> {
        self.log_scores.iter().map(|l| l.exp()).collect()
    }
}

struct LogPerron {
    x: Vec<f64>,
    log_lambda: f64,
    iterations: usize,
    residual: f64,
}

/// Shifted power iteration on `M = exp(l)` carried out on `ln v`.
///
/// Each step applies `M + c I` with `c` the current eigenvalue estimate,
/// which damps the near-cyclic part of the spectrum that Hadamard powers
/// develop as `k` grows. The iterate is kept at unit sum.
fn perron_log(l: &[f64], n: usize, opts: &PowerOptions) -> Result<LogPerron> {
    let scale = l.iter().fold(1f64, |m, v| m.max(v.abs()));
    let thresh = opts.tol * scale;
    let mut x = vec![-(n as f64).ln(); n];
    let mut y = vec![0.0; n];
    for it in 1..=opts.max_iter {
        for i in 0..n {
            let row = &l[i * n..(i + 1) * n];
            y[i] = log_sum_exp(row.iter().zip(&x).map(|(a, b)| a + b));
        }
        let log_c = log_sum_exp(y.iter().copied());
        let residual = (0..n)
            .map(|i| (y[i] - log_c - x[i]).abs())
            .fold(0.0, f64::max);
        let mut z: Vec<f64> = (0..n)
            .map(|i| {
                let (p, q) = (y[i], log_c + x[i]);
                let m = p.max(q);
                m + ((p - m).exp() + (q - m).exp()).ln()
            })
            .collect();
        let norm = log_sum_exp(z.iter().copied());
        z.iter_mut().for_each(|v| *v -= norm);
        let delta = z
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = z;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NoConvergence(it));
        }
        if delta < thresh && residual <= thresh {
            return Ok(finish(l, n, x, it));
        }
    }
    Err(Error::NoConvergence(opts.max_iter))
}

fn finish(l: &[f64], n: usize, x: Vec<f64>, iterations: usize) -> LogPerron {
    let y: Vec<f64> = (0..n)
        .map(|i| log_sum_exp(l[i * n..(i + 1) * n].iter().zip(&x).map(|(a, b)| a + b)))
        .collect();
    // Rayleigh quotient v'Mv / v'v
    let num = log_sum_exp((0..n).map(|i| x[i] + y[i]));
    let den = log_sum_exp(x.iter().map(|v| 2.0 * v));
    let log_lambda = num - den;
    let residual = (0..n)
        .map(|i| (y[i] - log_lambda - x[i]).exp_m1().abs())
        .fold(0.0, f64::max);
    LogPerron {
        x,
        log_lambda,
        iterations,
        residual,
    }
}

fn require_multiplicative(x: &ComparisonMatrix) -> Result<()> {
    if x.scale() != Scale::Multiplicative {
        return Err(Error::InvalidMatrix(
            "principal eigenvector needs a multiplicative matrix".into(),
        ));
    }
    Ok(())
}

/// Principal eigenvector by power iteration from the all-ones vector.
pub fn principal_scores(x: &ComparisonMatrix, tol: f64, max_iter: usize) -> Result<PerronSolution> {
    principal_scores_with(x, &PowerOptions { tol, max_iter })
}

pub fn principal_scores_with(x: &ComparisonMatrix, opts: &PowerOptions) -> Result<PerronSolution> {
    require_multiplicative(x)?;
    let n = x.n();
    let l: Vec<f64> = (0..n)
        .flat_map(|i| x.row(i).iter().map(|v| v.ln()).collect::<Vec<_>>())
        .collect();
    let sol = perron_log(&l, n, opts)?;
    let values = sol.x.iter().map(|v| (v - sol.x[0]).exp()).collect();
    Ok(PerronSolution {
        eigenvalue: sol.log_lambda.exp(),
        eigenvector: ScoreVector {
            values,
            scale: Scale::Multiplicative,
            normalization: Normalization::FirstComponentUnit,
        },
        iterations: sol.iterations,
        residual: sol.residual,
    })
}

/// Principal eigenvector of `X^(k)`, computed from `k (ln X - max ln X)`.
///
/// The shift multiplies the matrix by a positive constant, which leaves the
/// eigenvector unchanged; it is added back to the reported eigenvalue.
pub fn principal_hadamard(x: &ComparisonMatrix, k: f64, opts: &PowerOptions) -> Result<HadamardPerron> {
    require_multiplicative(x)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidMatrix(format!("exponent must be positive, got {k}")));
    }
    let n = x.n();
    let logs: Vec<f64> = (0..n).flat_map(|i| x.row(i).to_vec()).map(|v| v.ln()).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l: Vec<f64> = logs.iter().map(|v| k * (v - top)).collect();
    let sol = perron_log(&l, n, opts)?;
    Ok(HadamardPerron {
        k,
        log_scores: sol.x.iter().map(|v| v - sol.x[0]).collect(),
        log_eigenvalue: sol.log_lambda + k * top,
        iterations: sol.iterations,
        residual: sol.residual,
    })
}
