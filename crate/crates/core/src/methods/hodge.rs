use crate::matrix::{ComparisonMatrix, Scale};
use crate::ranking::{Normalization, ScoreVector};

/// HodgeRank scores.
///
/// Additive input: row sums divided by `n`, sum-zero. Multiplicative input:
/// geometric row means, first component one.
pub fn hodge_scores(a: &ComparisonMatrix) -> ScoreVector {
    let n = a.n();
    match a.scale() {
        Scale::Additive => {
            let values: Vec<f64> = (0..n)
                .map(|i| a.row(i).iter().sum::<f64>() / n as f64)
                .collect();
            ScoreVector {
                values,
                scale: Scale::Additive,
                normalization: Normalization::None,
            }
            .sum_zero()
        }
        Scale::Multiplicative => {
            let logs: Vec<f64> = (0..n)
                .map(|i| a.row(i).iter().map(|x| x.ln()).sum::<f64>() / n as f64)
                .collect();
            let values = logs.iter().map(|l| (l - logs[0]).exp()).collect();
            ScoreVector {
                values,
                scale: Scale::Multiplicative,
                normalization: Normalization::FirstComponentUnit,
            }
        }
    }
}
