use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kendall_tau;
use crate::error::{Error, Result};
use crate::geometry::threecycle_basis;
use crate::matrix::{pair_count, pair_index, ComparisonMatrix};
use crate::methods::{hodge_scores, principal_scores_with, tropical_solve, PowerOptions};
use crate::ranking::{Ranking, ScoreVector, DEFAULT_TIE_TOL};
use crate::witness::MethodPair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Noise {
    /// i.i.d. `N(0, sd)` on each upper-triangle entry.
    GaussianUpperTriangle { sd: f64 },
    /// i.i.d. `U(-halfwidth, halfwidth)` coefficients on the 3-cycles
    /// through item 1.
    UniformStPerp { halfwidth: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n: usize,
    pub trials: u64,
    pub noise: Noise,
    /// Additive true scores; `None` means all zero.
    pub true_scores: Option<Vec<f64>>,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!("need n >= 3, got {}", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("need at least one trial".into()));
        }
        let width = match self.noise {
            Noise::GaussianUpperTriangle { sd } => sd,
            Noise::UniformStPerp { halfwidth } => halfwidth,
        };
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidConfig(format!("noise width must be positive, got {width}")));
        }
        if let Some(s) = &self.true_scores {
            if s.len() != self.n || s.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "true scores must be {} finite values",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// What one trial produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    /// Hodge, principal and tropical rankings.
    Ranked([Ranking; 3]),
    /// Some method tied, or the tropical eigenvector was not unique.
    Degenerate,
    /// A solver failed.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStat {
    pub pair: MethodPair,
    pub disagreements: u64,
    /// `disagreements / ranked_trials`.
    pub rate: f64,
    pub kendall_sum: u64,
    pub mean_kendall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisagreementReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub noise: Noise,
    pub ranked_trials: u64,
    pub degenerate_trials: u64,
    pub failed_trials: u64,
    /// Ranked trials where all three rankings coincide.
    pub all_agree: u64,
    pub pairs: Vec<PairStat>,
}

impl DisagreementReport {
    pub fn pair(&self, pair: MethodPair) -> &PairStat {
        self.pairs.iter().find(|p| p.pair == pair).expect("all pairs reported")
    }
}

fn draw(cfg: &SimulationConfig, basis: &[Vec<f64>], trial: u64) -> Result<ComparisonMatrix> {
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let eps: Vec<f64> = match cfg.noise {
        Noise::GaussianUpperTriangle { sd } => {
            let d = Normal::new(0.0, sd).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            (0..pair_count(n)).map(|_| d.sample(&mut rng)).collect()
        }
        Noise::UniformStPerp { halfwidth } => {
            let d = Uniform::new(-halfwidth, halfwidth).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            let mut e = vec![0.0; pair_count(n)];
            for b in basis {
                let c = d.sample(&mut rng);
                for (x, y) in e.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            e
        }
    };
    let s = cfg.true_scores.clone().unwrap_or_else(|| vec![0.0; n]);
    ComparisonMatrix::additive_from_upper(n, |i, j| s[i] - s[j] + eps[pair_index(n, i, j)])
}

fn run_trial(cfg: &SimulationConfig, basis: &[Vec<f64>], trial: u64) -> TrialOutcome {
    let a = match draw(cfg, basis, trial) {
        Ok(a) => a,
        Err(e) => return TrialOutcome::Failed(e.to_string()),
    };
    let h = hodge_scores(&a);
    let t = tropical_solve(&a);
    if !t.unique {
        return TrialOutcome::Degenerate;
    }
    let x = match a.to_multiplicative(std::f64::consts::E) {
        Ok(x) => x,
        Err(e) => return TrialOutcome::Failed(e.to_string()),
    };
    let v: ScoreVector = match principal_scores_with(&x, &PowerOptions::default()) {
        Ok(p) => p.eigenvector,
        Err(e) => return TrialOutcome::Failed(e.to_string()),
    };
    match (
        h.ranking(DEFAULT_TIE_TOL),
        v.ranking(DEFAULT_TIE_TOL),
        t.eigenvector.ranking(DEFAULT_TIE_TOL),
    ) {
        (Ok(rh), Ok(rv), Ok(rm)) => TrialOutcome::Ranked([rh, rv, rm]),
        _ => TrialOutcome::Degenerate,
    }
}

/// Draws `A = S + ε` per trial and tallies how often the methods disagree.
///
/// Trial `t` uses a ChaCha8 generator seeded with `cfg.seed` on stream `t`,
/// so results do not depend on `jobs` or scheduling. `jobs = 0` uses all
/// available cores. The principal eigenvector is taken of `exp(A)`.
pub fn monte_carlo_disagreement(cfg: &SimulationConfig, jobs: usize) -> Result<DisagreementReport> {
    cfg.validate()?;
    let basis: Vec<Vec<f64>> = threecycle_basis(cfg.n, 0)?
        .iter()
        .map(|c| c.coords().iter().map(|&x| x as f64).collect())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &basis, t))
            .collect()
    });

    let mut ranked = 0u64;
    let mut degenerate = 0u64;
    let mut failed = 0u64;
    let mut all_agree = 0u64;
    // pairs in the order hodge-tropical, hodge-principal, tropical-principal
    let idx = [(0usize, 2usize), (0, 1), (2, 1)];
    let mut dis = [0u64; 3];
    let mut ksum = [0u64; 3];
    for o in &outcomes {
        match o {
            TrialOutcome::Ranked(r) => {
                ranked += 1;
                for (p, &(a, b)) in idx.iter().enumerate() {
                    let k = kendall_tau(&r[a], &r[b])? as u64;
                    ksum[p] += k;
                    if k > 0 {
                        dis[p] += 1;
                    }
                }
                if r[0] == r[1] && r[1] == r[2] {
                    all_agree += 1;
                }
            }
            TrialOutcome::Degenerate => degenerate += 1,
            TrialOutcome::Failed(_) => failed += 1,
        }
    }
    let ratio = |x: u64| if ranked == 0 { 0.0 } else { x as f64 / ranked as f64 };
    let pairs = MethodPair::ALL
        .iter()
        .enumerate()
        .map(|(p, &pair)| PairStat {
            pair,
            disagreements: dis[p],
            rate: ratio(dis[p]),
            kendall_sum: ksum[p],
            mean_kendall: ratio(ksum[p]),
        })
        .collect();
    Ok(DisagreementReport {
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        noise: cfg.noise,
        ranked_trials: ranked,
        degenerate_trials: degenerate,
        failed_trials: failed,
        all_agree,
        pairs,
    })
}
