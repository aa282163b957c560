use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{pairs, ComparisonMatrix};
use crate::methods::{hodge_scores, tropical_eigenvalue, tropical_solve};
use crate::ranking::{relative_min_gap, DEFAULT_TIE_TOL};

/// Relative gap below which a score vector is treated as nearly tied.
pub(crate) const GAP_GUARD: f64 = 1e-10;

/// On four items the row-sum constraints force `c1 + c3 = c2 + c4` on the
/// 4-cycle, so a strictly decreasing cycle is impossible. This fixed matrix
/// has zero row sums, the 4-cycle `1 -> 2 -> 3 -> 4 -> 1` as its unique
/// critical cycle and tropical eigenvector `(-1, 3, 1, -3) / 2`.
fn base4() -> ComparisonMatrix {
    let up = [8.0, 1.0, -9.0, 11.0, -3.0, 12.0];
    ComparisonMatrix::additive_from_upper(4, |i, j| up[crate::matrix::pair_index(4, i, j)])
        .expect("finite entries")
}

/// Solves for the off-cycle entries: least-norm solution of "every row sums
/// to zero" with the cycle entries `c` held fixed.
fn fill_row_sums(n: usize, c: &[f64]) -> Result<ComparisonMatrix> {
    let on_cycle = |i: usize, j: usize| j == i + 1 || (i == 0 && j == n - 1);
    let free: Vec<(usize, usize)> = pairs(n).into_iter().filter(|&(i, j)| !on_cycle(i, j)).collect();
    // fixed contribution of the cycle entries to each row sum
    let mut rhs = vec![0.0; n];
    for i in 0..n - 1 {
        rhs[i] -= c[i];
        rhs[i + 1] += c[i];
    }
    // A_{n,1} = c_n, so A_{1,n} = -c_n
    rhs[n - 1] -= c[n - 1];
    rhs[0] += c[n - 1];
    let mut m = DMatrix::<f64>::zeros(n, free.len());
    for (col, &(i, j)) in free.iter().enumerate() {
        m[(i, col)] = 1.0;
        m[(j, col)] = -1.0;
    }
    let x = m
        .svd(true, true)
        .solve(&DVector::from_vec(rhs.clone()), 1e-12)
        .map_err(|e| Error::ConstructionFailed(format!("least-norm fill: {e}")))?;
    let mut up = vec![0.0; n * n];
    for i in 0..n - 1 {
        up[i * n + i + 1] = c[i];
    }
    up[n - 1] = -c[n - 1];
    for (col, &(i, j)) in free.iter().enumerate() {
        up[i * n + j] = x[col];
    }
    ComparisonMatrix::additive_from_upper(n, |i, j| up[i * n + j])
}

/// Cycle weights `2(n - i) + 1 + t / (100 i)` for `i = 1..n`.
fn cycle_scheme(n: usize, t: u32) -> Vec<f64> {
    (1..=n)
        .map(|i| (2 * (n - i) + 1) as f64 + t as f64 / (100.0 * i as f64))
        .collect()
}

/// Scores along the cycle: `m_1 = 0`, `m_{i+1} = m_i - (c_i - mean(c))`.
fn cycle_scores(c: &[f64]) -> Vec<f64> {
    let mu = c.iter().sum::<f64>() / c.len() as f64;
    let mut m = vec![0.0; c.len()];
    for i in 1..c.len() {
        m[i] = m[i - 1] - (c[i - 1] - mu);
    }
    m
}

/// An additive matrix with zero HodgeRank scores and a unique, tie-free
/// tropical eigenvector.
///
/// For `n >= 5` the cycle `1 -> 2 -> ... -> n -> 1` gets decreasing weights,
/// the remaining entries are filled to make all row sums zero, and a
/// multiple of the cycle matrix `B` is added until the cycle is the unique
/// critical cycle and holds the maximum of every row.
pub fn base_hodge_zero_tropical_generic(n: usize) -> Result<ComparisonMatrix> {
    if n < 4 {
        return Err(Error::InvalidRequest(format!("need n >= 4, got {n}")));
    }
    let a = if n == 4 { base4() } else { cycle_base(n)? };
    check_base(&a)?;
    Ok(a)
}

fn cycle_base(n: usize) -> Result<ComparisonMatrix> {
    let mut chosen = None;
    for t in 0..=100 {
        let c = cycle_scheme(n, t);
        let mu = c.iter().sum::<f64>() / n as f64;
        if c.iter().any(|x| (x - mu).abs() < 1e-9) {
            continue;
        }
        if relative_min_gap(&cycle_scores(&c)) > 1e-6 {
            chosen = Some(c);
            break;
        }
    }
    let c = chosen.ok_or_else(|| Error::ConstructionFailed("cycle weights".into()))?;
    let mu = c.iter().sum::<f64>() / n as f64;
    let a0 = fill_row_sums(n, &c)?;

    let mut kb = 1.0;
    for _ in 0..60 {
        let a = a0.combine(&ComparisonMatrix::additive_from_upper(n, |i, j| {
            if j == i + 1 {
                kb
            } else if i == 0 && j == n - 1 {
                -kb
            } else {
                0.0
            }
        })?)?;
        let rows_ok = (0..n).all(|i| {
            let next = (i + 1) % n;
            let top = a.get(i, next);
            (0..n).all(|j| j == next || a.get(i, j) < top)
        });
        if rows_ok && (tropical_eigenvalue(&a) - (mu + kb)).abs() < 1e-9 {
            let sol = tropical_solve(&a);
            let mut cycle_edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            cycle_edges.sort_unstable();
            if sol.unique && sol.critical_edges == cycle_edges {
                return Ok(a);
            }
        }
        kb *= 2.0;
    }
    Err(Error::ConstructionFailed("cycle multiplier".into()))
}

fn check_base(a: &ComparisonMatrix) -> Result<()> {
    let h = hodge_scores(a);
    let hmax = h.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if hmax >= 1e-12 {
        return Err(Error::ConstructionFailed(format!("hodge scores not zero ({hmax:e})")));
    }
    let sol = tropical_solve(a);
    if !sol.unique {
        return Err(Error::ConstructionFailed("tropical eigenvector not unique".into()));
    }
    sol.eigenvector
        .ranking(DEFAULT_TIE_TOL)
        .map_err(|e| Error::ConstructionFailed(format!("tropical ranking: {e}")))?;
    Ok(())
}
