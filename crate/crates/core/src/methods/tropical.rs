use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{check_base, ComparisonMatrix, Scale};
use crate::ranking::{Normalization, ScoreVector};

/// Absolute tolerance on `B_ij + B*_ji` for an edge to count as critical.
pub const CRITICAL_TOL: f64 = 1e-9;

/// Max-plus eigenpair of an additive matrix with its critical structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TropicalSolution {
    pub lambda: f64,
    /// Additive, sum-zero.
    pub eigenvector: ScoreVector,
    /// 0-based, increasing.
    pub critical_vertices: Vec<usize>,
    /// 0-based `(i, j)` pairs in row-major order; self-loops included.
    pub critical_edges: Vec<(usize, usize)>,
    pub critical_class_count: usize,
    pub unique: bool,
}

impl TropicalSolution {
    /// `max_i |max_j (A_ij + m_j) - lambda - m_i|`.
    pub fn residual(&self, a: &ComparisonMatrix) -> f64 {
        let m = &self.eigenvector.values;
        let n = a.n();
        (0..n)
            .map(|i| {
                let best = (0..n)
                    .map(|j| a.get(i, j) + m[j])
                    .fold(f64::NEG_INFINITY, f64::max);
                (best - self.lambda - m[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Maximum cycle mean of the complete digraph weighted by `A` (multiplicative
/// input is read through its natural log), by Karp's recurrence.
pub fn tropical_eigenvalue(a: &ComparisonMatrix) -> f64 {
    let a = a.log_form();
    let n = a.n();
    // d[k][v]: heaviest walk of exactly k edges from vertex 0 to v
    let mut d = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    d[0][0] = 0.0;
    for k in 1..=n {
        for v in 0..n {
            d[k][v] = (0..n)
                .filter(|&u| d[k - 1][u] > f64::NEG_INFINITY)
                .map(|u| d[k - 1][u] + a.get(u, v))
                .fold(f64::NEG_INFINITY, f64::max);
        }
    }
    (0..n)
        .filter(|&v| d[n][v] > f64::NEG_INFINITY)
        .map(|v| {
            (0..n)
                .filter(|&k| d[k][v] > f64::NEG_INFINITY)
                .map(|k| (d[n][v] - d[k][v]) / (n - k) as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Max-plus Kleene star `I ⊕ B ⊕ B² ⊕ ...` of a row-major `n x n` matrix
/// with no positive-weight cycle.
pub fn kleene_star(b: &[f64], n: usize) -> Vec<f64> {
    let mut s = b.to_vec();
    for k in 0..n {
        for i in 0..n {
            let sik = s[i * n + k];
            if sik == f64::NEG_INFINITY {
                continue;
            }
            for j in 0..n {
                let cand = sik + s[k * n + j];
                if cand > s[i * n + j] {
                    s[i * n + j] = cand;
                }
            }
        }
    }
    for i in 0..n {
        s[i * n + i] = s[i * n + i].max(0.0);
    }
    s
}

/// Tropical eigenvalue, eigenvector and critical graph.
///
/// The eigenvector is the Kleene-star column of the smallest critical
/// vertex, so it is well defined even when the eigenspace is larger.
pub fn tropical_solve(a: &ComparisonMatrix) -> TropicalSolution {
    let a = a.log_form();
    let n = a.n();
    let lambda = tropical_eigenvalue(&a);
    let b: Vec<f64> = (0..n * n).map(|p| a.get(p / n, p % n) - lambda).collect();
    let star = kleene_star(&b, n);

    let mut critical_edges = Vec::new();
    let mut adj = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if (b[i * n + j] + star[j * n + i]).abs() < CRITICAL_TOL {
                critical_edges.push((i, j));
                adj[i * n + j] = true;
            }
        }
    }
    // transitive closure of the critical graph
    let mut reach = adj.clone();
    for k in 0..n {
        for i in 0..n {
            if reach[i * n + k] {
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
    }
    let mut critical_vertices: Vec<usize> = critical_edges
        .iter()
        .flat_map(|&(i, j)| [i, j])
        .collect();
    critical_vertices.sort_unstable();
    critical_vertices.dedup();

    let mut class_of = vec![usize::MAX; n];
    let mut classes = 0;
    for v in 0..n {
        if !reach[v * n + v] || class_of[v] != usize::MAX {
            continue;
        }
        for w in v..n {
            if reach[v * n + w] && reach[w * n + v] {
                class_of[w] = classes;
            }
        }
        classes += 1;
    }

    let c = critical_vertices.first().copied().unwrap_or(0);
    let column: Vec<f64> = (0..n).map(|i| star[i * n + c]).collect();
    let eigenvector = ScoreVector {
        values: column,
        scale: Scale::Additive,
        normalization: Normalization::None,
    }
    .sum_zero();

    TropicalSolution {
        lambda,
        eigenvector,
        critical_vertices,
        critical_edges,
        critical_class_count: classes,
        unique: classes == 1,
    }
}

/// `exp_b` of the additive tropical eigenvector of `log_b X`, first
/// component one.
pub fn tropical_scores_multiplicative(x: &ComparisonMatrix, base: f64) -> Result<ScoreVector> {
    if x.scale() != Scale::Multiplicative {
        return Err(Error::InvalidMatrix(
            "expected a multiplicative matrix".into(),
        ));
    }
    let lb = check_base(base)?;
    let sol = tropical_solve(&x.to_additive(base)?);
    let m = &sol.eigenvector.values;
    Ok(ScoreVector {
        values: m.iter().map(|v| ((v - m[0]) * lb).exp()).collect(),
        scale: Scale::Multiplicative,
        normalization: Normalization::FirstComponentUnit,
    })
}
