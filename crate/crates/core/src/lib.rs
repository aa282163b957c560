//! Ranking from paired comparison matrices.
//!
//! Three estimators are provided: the principal (Perron) eigenvector,
//! HodgeRank (the least-squares projection onto strongly transitive
//! matrices) and the max-plus (tropical) eigenvector. Around them sit the
//! geometric tools relating the three, constructions of matrices on which
//! any two of them disagree in a prescribed way, and some analysis helpers.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod io;
pub mod matrix;
pub mod methods;
pub mod ranking;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{ComparisonMatrix, Scale, UpperTriangleVector, DEFAULT_RECIPROCITY_TOL};
pub use methods::{
    hodge_scores, principal_scores, tropical_eigenvalue, tropical_scores_multiplicative,
    tropical_solve, PerronSolution, PowerOptions, TropicalSolution,
};
pub use ranking::{rank_of, Normalization, Permutation, Ranking, ScoreVector, DEFAULT_TIE_TOL};
