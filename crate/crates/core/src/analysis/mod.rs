//! Consistency index, rank distance, Hadamard-power trajectories and the
//! Monte Carlo disagreement study.

mod simulate;

pub use simulate::{
    monte_carlo_disagreement, DisagreementReport, Noise, PairStat, SimulationConfig, TrialOutcome,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComparisonMatrix, Scale};
use crate::methods::{principal_hadamard, principal_scores_with, PowerOptions};
use crate::ranking::{rank_of, Ranking, DEFAULT_TIE_TOL};

/// `(λ(X) - n) / (n - 1)` for the Perron value `λ(X)`.
pub fn consistency_index(x: &ComparisonMatrix) -> Result<f64> {
    let n = x.n() as f64;
    let p = principal_scores_with(x, &PowerOptions::default())?;
    Ok((p.eigenvalue - n) / (n - 1.0))
}

/// Number of item pairs ordered differently by the two rankings.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<usize> {
    if r1.len() != r2.len() {
        return Err(Error::SizeMismatch {
            expected: r1.len(),
            actual: r2.len(),
        });
    }
    let p1 = r1.positions();
    let p2 = r2.positions();
    let n = r1.len();
    let mut d = 0;
    for a in 0..n {
        for b in a + 1..n {
            if (p1[a] < p1[b]) != (p2[a] < p2[b]) {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// Induced ranking at one trajectory point, or why there is none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRanking {
    Ranked(Ranking),
    /// 1-based items whose scores tie.
    Tie(usize, usize),
    NoConvergence(usize),
}

impl PointRanking {
    pub fn ranking(&self) -> Option<&Ranking> {
        match self {
            PointRanking::Ranked(r) => Some(r),
            _ => None,
        }
    }
}

impl std::fmt::Display for PointRanking {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointRanking::Ranked(r) => write!(f, "{}", r.one_based().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(">")),
            PointRanking::Tie(a, b) => write!(f, "tie({a},{b})"),
            PointRanking::NoConvergence(it) => write!(f, "no-convergence({it})"),
        }
    }
}

/// Principal eigenvector of `X^(k)` at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub k: f64,
    /// First component one; empty if the solver failed.
    pub v_normalized: Vec<f64>,
    /// `ln v`, first component zero.
    pub log_v: Vec<f64>,
    /// `v^(1/k)`, first component one.
    pub root: Vec<f64>,
    pub ranking: PointRanking,
}

/// 60 logarithmically spaced exponents from 0.05 to 60.
pub fn default_k_grid() -> Vec<f64> {
    log_grid(0.05, 60.0, 60)
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

fn point(x: &ComparisonMatrix, k: f64, opts: &PowerOptions) -> TrajectoryPoint {
    match principal_hadamard(x, k, opts) {
        Ok(p) => {
            let ranking = match rank_of(&p.log_scores, DEFAULT_TIE_TOL) {
                Ok(r) => PointRanking::Ranked(r),
                Err(Error::TieDetected(a, b)) => PointRanking::Tie(a, b),
                Err(_) => PointRanking::Tie(1, 1),
            };
            TrajectoryPoint {
                k,
                v_normalized: p.normalized(),
                root: p.log_scores.iter().map(|l| (l / k).exp()).collect(),
                log_v: p.log_scores,
                ranking,
            }
        }
        Err(Error::NoConvergence(it)) => TrajectoryPoint {
            k,
            v_normalized: Vec::new(),
            log_v: Vec::new(),
            root: Vec::new(),
            ranking: PointRanking::NoConvergence(it),
        },
        Err(e) => unreachable!("validated input: {e}"),
    }
}

/// Principal eigenvectors of `X^(k)` along `k_grid`. A solver failure at
/// one exponent is recorded in that point and the sweep continues.
pub fn hadamard_trajectory(x: &ComparisonMatrix, k_grid: &[f64], tol: f64) -> Result<Vec<TrajectoryPoint>> {
    if x.scale() != Scale::Multiplicative {
        return Err(Error::InvalidMatrix("trajectory needs a multiplicative matrix".into()));
    }
    if k_grid.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
        return Err(Error::InvalidRequest("exponents must be positive".into()));
    }
    if k_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRequest("exponents must increase strictly".into()));
    }
    let opts = PowerOptions {
        tol,
        ..PowerOptions::default()
    };
    Ok(k_grid.iter().map(|&k| point(x, k, &opts)).collect())
}

/// Bisects `[k_lo, k_hi]`, whose endpoints induce different principal
/// rankings, down to width `width`; returns the final bracket.
pub fn locate_ranking_change(x: &ComparisonMatrix, k_lo: f64, k_hi: f64, width: f64) -> Result<(f64, f64)> {
    let opts = PowerOptions::default();
    let rank_at = |k: f64| -> Result<Ranking> {
        let p = principal_hadamard(x, k, &opts)?;
        rank_of(&p.log_scores, DEFAULT_TIE_TOL)
    };
    let (mut lo, mut hi) = (k_lo, k_hi);
    let r_lo = rank_at(lo)?;
    if rank_at(hi)? == r_lo {
        return Err(Error::InvalidRequest("rankings agree at both ends".into()));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        match rank_at(mid) {
            Ok(r) if r == r_lo => lo = mid,
            Ok(_) => hi = mid,
            // a tie at the midpoint is the crossing itself
            Err(Error::TieDetected(..)) => return Ok((mid, mid)),
            Err(e) => return Err(e),
        }
    }
    Ok((lo, hi))
}
