use anyhow::Result;
use pairank::analysis::kendall_tau;
use pairank::methods::principal_scores_with;
use pairank::{
    hodge_scores, tropical_solve, ComparisonMatrix, Normalization, PowerOptions, Ranking, Scale,
    ScoreVector, DEFAULT_TIE_TOL,
};
use serde::{Deserialize, Serialize};

use crate::format::{csv, dec3, round12, table};

/// `3>4>1>2`, 1-based.
pub fn compact(r: &Ranking) -> String {
    r.one_based().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(">")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodScores {
    /// First component one for multiplicative input, sum zero for additive.
    pub scores: Vec<f64>,
    /// `None` when two scores tie or the eigenvector is not unique.
    pub ranking: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KendallTau {
    pub hodge_principal: Option<usize>,
    pub hodge_tropical: Option<usize>,
    pub tropical_principal: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub input: String,
    pub n: usize,
    pub scale: Scale,
    pub base: f64,
    pub principal: MethodScores,
    pub hodge: MethodScores,
    pub tropical: MethodScores,
    pub perron_eigenvalue: f64,
    pub consistency_index: f64,
    /// In units of `log_base` of the multiplicative entries.
    pub tropical_lambda: f64,
    pub tropical_unique: bool,
    pub kendall_tau: KendallTau,
}

fn method(scores: &ScoreVector, allowed: bool) -> (MethodScores, Option<Ranking>) {
    let ranking = if allowed { scores.ranking(DEFAULT_TIE_TOL).ok() } else { None };
    (
        MethodScores {
            scores: scores.values.iter().map(|&x| round12(x)).collect(),
            ranking: ranking.as_ref().map(compact),
        },
        ranking,
    )
}

fn tau(a: &Option<Ranking>, b: &Option<Ranking>) -> Option<usize> {
    match (a, b) {
        (Some(a), Some(b)) => kendall_tau(a, b).ok(),
        _ => None,
    }
}

impl RankReport {
    /// Runs the three methods on `m`. Scores are reported in `m`'s scale.
    pub fn build(input: &str, m: &ComparisonMatrix, base: f64) -> Result<Self> {
        let lb = pairank::matrix::check_base(base)?;
        let (a, x) = match m.scale() {
            Scale::Additive => (m.clone(), m.to_multiplicative(base)?),
            Scale::Multiplicative => (m.to_additive(base)?, m.clone()),
        };
        let perron = principal_scores_with(&x, &PowerOptions::default())?;
        let trop = tropical_solve(&a);
        let h = hodge_scores(m);
        let (v, t) = match m.scale() {
            Scale::Multiplicative => {
                let t0 = trop.eigenvector.values[0];
                let t = ScoreVector {
                    values: trop.eigenvector.values.iter().map(|y| ((y - t0) * lb).exp()).collect(),
                    scale: Scale::Multiplicative,
                    normalization: Normalization::FirstComponentUnit,
                };
                (perron.eigenvector.clone(), t)
            }
            Scale::Additive => {
                let v = ScoreVector::additive(
                    perron.eigenvector.values.iter().map(|y| y.ln() / lb).collect(),
                )?
                .sum_zero();
                (v, trop.eigenvector.clone())
            }
        };
        let (principal, rv) = method(&v, true);
        let (hodge, rh) = method(&h, true);
        let (tropical, rt) = method(&t, trop.unique);
        let n = m.n() as f64;
        Ok(Self {
            input: input.to_string(),
            n: m.n(),
            scale: m.scale(),
            base,
            principal,
            hodge,
            tropical,
            perron_eigenvalue: round12(perron.eigenvalue),
            consistency_index: round12((perron.eigenvalue - n) / (n - 1.0)),
            tropical_lambda: round12(trop.lambda),
            tropical_unique: trop.unique,
            kendall_tau: KendallTau {
                hodge_principal: tau(&rh, &rv),
                hodge_tropical: tau(&rh, &rt),
                tropical_principal: tau(&rt, &rv),
            },
        })
    }

    /// A method tied or the tropical eigenvector is not unique.
    pub fn is_degenerate(&self) -> bool {
        !self.tropical_unique
            || [&self.principal, &self.hodge, &self.tropical].iter().any(|m| m.ranking.is_none())
    }

    fn rows(&self, fmt: impl Fn(f64) -> String) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| {
                vec![
                    (i + 1).to_string(),
                    fmt(self.principal.scores[i]),
                    fmt(self.hodge.scores[i]),
                    fmt(self.tropical.scores[i]),
                ]
            })
            .collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = table(&["item", "principal", "hodge", "tropical"], &self.rows(dec3));
        let r = |m: &MethodScores| m.ranking.clone().unwrap_or_else(|| "tie".into());
        let k = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        out.push('\n');
        out.push_str(&table(
            &["quantity", "value"],
            &[
                vec!["principal ranking".into(), r(&self.principal)],
                vec!["hodge ranking".into(), r(&self.hodge)],
                vec!["tropical ranking".into(), r(&self.tropical)],
                vec!["consistency index".into(), dec3(self.consistency_index)],
                vec!["perron eigenvalue".into(), dec3(self.perron_eigenvalue)],
                vec!["tropical lambda".into(), dec3(self.tropical_lambda)],
                vec!["tropical unique".into(), self.tropical_unique.to_string()],
                vec!["kendall hodge-principal".into(), k(self.kendall_tau.hodge_principal)],
                vec!["kendall hodge-tropical".into(), k(self.kendall_tau.hodge_tropical)],
                vec!["kendall tropical-principal".into(), k(self.kendall_tau.tropical_principal)],
            ],
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        csv(&["item", "principal", "hodge", "tropical"], &self.rows(pairank::io::fmt_num))
    }
}
