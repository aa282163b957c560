//! The three score estimators.

mod hodge;
mod principal;
mod tropical;

pub use hodge::hodge_scores;
pub use principal::{
    principal_hadamard, principal_scores, principal_scores_with, HadamardPerron, PerronSolution,
    PowerOptions,
};
pub use tropical::{
    kleene_star, tropical_eigenvalue, tropical_scores_multiplicative, tropical_solve,
    TropicalSolution, CRITICAL_TOL,
};

/// `ln(sum(exp(xs)))`, stable for large magnitudes.
pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}
