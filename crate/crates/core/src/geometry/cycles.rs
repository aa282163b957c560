use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{pair_count, pair_index, ComparisonMatrix, Scale, UpperTriangleVector};
use crate::methods::{hodge_scores, tropical_solve};

/// Signed incidence vector `s(π)` of a directed cycle on the upper-triangle
/// coordinates: the edge `a -> b` contributes `+1` at `(a, b)` if `a < b`
/// and `-1` at `(b, a)` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleVector {
    n: usize,
    /// 0-based vertices in traversal order.
    cycle: Vec<usize>,
    coords: Vec<i64>,
}

impl CycleVector {
    pub fn new(n: usize, cycle: &[usize]) -> Result<Self> {
        if cycle.len() < 2 {
            return Err(Error::InvalidPermutation("a cycle needs two vertices".into()));
        }
        let mut seen = vec![false; n];
        for &v in cycle {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{cycle:?} is not a simple cycle on 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self {
            n,
            cycle: cycle.to_vec(),
            coords: incidence(n, cycle),
        })
    }

    /// Cycle written with 1-based labels, e.g. `&[1, 2, 3, 4]`.
    pub fn from_one_based(n: usize, cycle: &[usize]) -> Result<Self> {
        if cycle.contains(&0) {
            return Err(Error::InvalidPermutation("labels are 1-based".into()));
        }
        Self::new(n, &cycle.iter().map(|v| v - 1).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn as_upper_triangle(&self) -> UpperTriangleVector {
        UpperTriangleVector::new(self.n, self.coords.iter().map(|&c| c as f64).collect())
            .expect("length fixed by construction")
    }

    /// `<s(π), A>`, the sum of `A` along the cycle.
    pub fn value(&self, a: &ComparisonMatrix) -> f64 {
        let mut idx = 0;
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.coords[idx] != 0 {
                    acc += self.coords[idx] as f64 * a.get(i, j);
                }
                idx += 1;
            }
        }
        acc
    }
}

fn incidence(n: usize, cycle: &[usize]) -> Vec<i64> {
    let mut coords = vec![0; pair_count(n)];
    for (p, &a) in cycle.iter().enumerate() {
        let b = cycle[(p + 1) % cycle.len()];
        if a < b {
            coords[pair_index(n, a, b)] += 1;
        } else {
            coords[pair_index(n, b, a)] -= 1;
        }
    }
    coords
}

/// Integer dot product of two coordinate vectors.
pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The row-sum vectors `t_1..t_n`: `<t_i, A>` is the `i`-th row sum of `A`.
/// Any `n - 1` of them span the strongly transitive subspace.
pub fn t_basis(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut t = vec![0; pair_count(n)];
            for j in 0..n {
                if j > i {
                    t[pair_index(n, i, j)] = 1;
                } else if j < i {
                    t[pair_index(n, j, i)] = -1;
                }
            }
            t
        })
        .collect()
}

/// The 3-cycles `(v j k)`, `j < k`, through a fixed vertex `v` (0-based).
/// They form a basis of the orthogonal complement of the strongly
/// transitive subspace.
pub fn threecycle_basis(n: usize, v: usize) -> Result<Vec<CycleVector>> {
    if n < 3 || v >= n {
        return Err(Error::InvalidMatrix(format!(
            "need n >= 3 and a vertex below n, got n = {n}, v = {v}"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&x| x != v).collect();
    let mut out = Vec::new();
    for (p, &j) in others.iter().enumerate() {
        for &k in &others[p + 1..] {
            out.push(CycleVector::new(n, &[v, j, k])?);
        }
    }
    Ok(out)
}

/// Orthogonal split `A = P + R` with `P` strongly transitive (built from the
/// HodgeRank scores) and `R` orthogonal to every strongly transitive matrix.
pub fn project_components(a: &ComparisonMatrix) -> Result<(ComparisonMatrix, ComparisonMatrix)> {
    if a.scale() != Scale::Additive {
        return Err(Error::InvalidMatrix("projection needs an additive matrix".into()));
    }
    let p = ComparisonMatrix::strongly_transitive_from_scores(&hodge_scores(a))?;
    let r = a.difference(&p)?;
    Ok((p, r))
}

/// Residuals from checking that the inconsistent part `A - P(A)` has the same
/// tropical eigenvalue as `A` and eigenvector `m(A) - h(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub lambda: f64,
    pub lambda_residual: f64,
    pub vector_residual: f64,
}

/// Tolerance used by [`m_minus_h_reduction`].
pub const REDUCTION_TOL: f64 = 1e-9;

pub fn m_minus_h_reduction(a: &ComparisonMatrix) -> Result<ReductionRecord> {
    let (_, r) = project_components(a)?;
    let full = tropical_solve(a);
    if !full.unique {
        return Err(Error::InvalidMatrix(
            "tropical eigenvector is not unique".into(),
        ));
    }
    let reduced = tropical_solve(&r);
    let h = hodge_scores(a);
    let target: Vec<f64> = full
        .eigenvector
        .values
        .iter()
        .zip(&h.values)
        .map(|(m, h)| m - h)
        .collect();
    // both sides are sum-zero, so "up to a constant" reduces to equality
    // after recentering
    let shift = (reduced.eigenvector.values.iter().sum::<f64>() - target.iter().sum::<f64>())
        / target.len() as f64;
    let vector_residual = reduced
        .eigenvector
        .values
        .iter()
        .zip(&target)
        .map(|(x, y)| (x - y - shift).abs())
        .fold(0.0, f64::max);
    let lambda_residual = (reduced.lambda - full.lambda).abs();
    let worst = vector_residual.max(lambda_residual);
    if worst > REDUCTION_TOL {
        return Err(Error::ReductionViolated(worst));
    }
    Ok(ReductionRecord {
        lambda: full.lambda,
        lambda_residual,
        vector_residual,
    })
}
