//! Matrices on which two ranking methods produce prescribed rankings.

mod base;
mod perturbed;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{check_base, ComparisonMatrix, Scale};
use crate::methods::{hodge_scores, principal_scores_with, tropical_solve, PowerOptions};
use crate::ranking::{relative_min_gap, Normalization, Ranking, ScoreVector, DEFAULT_TIE_TOL};

pub use base::base_hodge_zero_tropical_generic;
pub use perturbed::{
    perturbed_closed_form, perturbed_matrix, perturbed_matrix_exact, PerturbedClosedForm,
    PerturbedSpec,
};

use base::GAP_GUARD;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Hodge,
    Principal,
    Tropical,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Hodge => "hodge",
            Method::Principal => "principal",
            Method::Tropical => "tropical",
        })
    }
}

/// Which two methods a witness separates. `sigma1` belongs to the first
/// named method, `sigma2` to the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodPair {
    HodgeVsTropical,
    HodgeVsPrincipal,
    TropicalVsPrincipal,
}

impl MethodPair {
    pub fn methods(self) -> (Method, Method) {
        match self {
            MethodPair::HodgeVsTropical => (Method::Hodge, Method::Tropical),
            MethodPair::HodgeVsPrincipal => (Method::Hodge, Method::Principal),
            MethodPair::TropicalVsPrincipal => (Method::Tropical, Method::Principal),
        }
    }

    pub const ALL: [MethodPair; 3] = [
        MethodPair::HodgeVsTropical,
        MethodPair::HodgeVsPrincipal,
        MethodPair::TropicalVsPrincipal,
    ];
}

impl std::str::FromStr for MethodPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "hodge-tropical" | "hodge-vs-tropical" => Ok(MethodPair::HodgeVsTropical),
            "hodge-principal" | "hodge-vs-principal" => Ok(MethodPair::HodgeVsPrincipal),
            "tropical-principal" | "tropical-vs-principal" => Ok(MethodPair::TropicalVsPrincipal),
            other => Err(Error::InvalidRequest(format!("unknown method pair {other:?}"))),
        }
    }
}

impl std::fmt::Display for MethodPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.methods();
        write!(f, "{a}-{b}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRequest {
    pub n: usize,
    pub pair: MethodPair,
    pub sigma1: Ranking,
    pub sigma2: Ranking,
}

impl WitnessRequest {
    pub fn new(n: usize, pair: MethodPair, sigma1: Ranking, sigma2: Ranking) -> Result<Self> {
        let req = Self {
            n,
            pair,
            sigma1,
            sigma2,
        };
        req.validate()?;
        Ok(req)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::InvalidRequest(format!(
                "witnesses need at least 4 items, got n = {}",
                self.n
            )));
        }
        for s in [&self.sigma1, &self.sigma2] {
            if s.len() != self.n {
                return Err(Error::SizeMismatch {
                    expected: self.n,
                    actual: s.len(),
                });
            }
        }
        Ok(())
    }
}

/// One method's recomputed output on the witness matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub scores: ScoreVector,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub first: MethodOutcome,
    pub second: MethodOutcome,
}

/// Construction parameters actually used.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WitnessParameters {
    /// Hadamard exponent (principal pairs).
    pub k: Option<f64>,
    /// Weight of the strongly transitive nudge (Hodge vs tropical step).
    pub epsilon: Option<f64>,
    /// `L` of the perturbed matrix, as `p/q`.
    pub l: Option<String>,
    /// `(δ_2, ..., δ_n)` as `p/q`.
    pub delta: Option<Vec<String>>,
    pub base: f64,
    /// Both rankings agree and a strongly transitive matrix was returned.
    pub shortcut: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub request: WitnessRequest,
    pub matrix: ComparisonMatrix,
    pub verification: Verification,
    pub parameters: WitnessParameters,
}

fn guarded(scores: &ScoreVector) -> Result<Ranking> {
    let r = scores.ranking(DEFAULT_TIE_TOL)?;
    let gap = relative_min_gap(&scores.log_values());
    if gap <= GAP_GUARD {
        return Err(Error::VerificationFailed(format!("near-tie (relative gap {gap:e})")));
    }
    Ok(r)
}

/// Recomputes one method on `m` and returns its scores and ranking.
///
/// Multiplicative matrices are read through `log_b` for the tropical method.
/// A non-unique tropical eigenvector or a near-tie is an error.
pub fn evaluate(m: &ComparisonMatrix, method: Method, base: f64) -> Result<MethodOutcome> {
    let scores = match method {
        Method::Hodge => hodge_scores(m),
        Method::Principal => {
            if m.scale() != Scale::Multiplicative {
                return Err(Error::InvalidMatrix(
                    "principal eigenvector needs a multiplicative matrix".into(),
                ));
            }
            principal_scores_with(m, &PowerOptions::default())?.eigenvector
        }
        Method::Tropical => {
            let (a, lb) = match m.scale() {
                Scale::Additive => (m.clone(), None),
                Scale::Multiplicative => (m.to_additive(base)?, Some(check_base(base)?)),
            };
            let sol = tropical_solve(&a);
            if !sol.unique {
                return Err(Error::VerificationFailed(
                    "tropical eigenvector is not unique".into(),
                ));
            }
            match lb {
                None => sol.eigenvector,
                Some(lb) => {
                    let v = &sol.eigenvector.values;
                    ScoreVector {
                        values: v.iter().map(|x| ((x - v[0]) * lb).exp()).collect(),
                        scale: Scale::Multiplicative,
                        normalization: Normalization::FirstComponentUnit,
                    }
                }
            }
        }
    };
    let ranking = guarded(&scores)?;
    Ok(MethodOutcome {
        method,
        scores,
        ranking,
    })
}

/// Recomputes both methods of `req.pair` on `m` and checks the rankings.
pub fn verify(req: &WitnessRequest, m: &ComparisonMatrix, base: f64) -> Result<Verification> {
    let (p, q) = req.pair.methods();
    let first = evaluate(m, p, base)?;
    let second = evaluate(m, q, base)?;
    if first.ranking != req.sigma1 || second.ranking != req.sigma2 {
        return Err(Error::VerificationFailed(format!(
            "{p} gives {} (wanted {}), {q} gives {} (wanted {})",
            first.ranking, req.sigma1, second.ranking, req.sigma2
        )));
    }
    Ok(Verification { first, second })
}

fn shortcut(req: &WitnessRequest, base: f64) -> Result<WitnessResult> {
    let s = ScoreVector::additive(req.sigma1.canonical_scores())?;
    let mut m = ComparisonMatrix::strongly_transitive_from_scores(&s)?;
    if req.pair != MethodPair::HodgeVsTropical {
        m = m.to_multiplicative(base)?;
    }
    let verification = verify(req, &m, base)?;
    Ok(WitnessResult {
        request: req.clone(),
        matrix: m,
        verification,
        parameters: WitnessParameters {
            k: (req.pair != MethodPair::HodgeVsTropical).then_some(1.0),
            base,
            shortcut: true,
            ..Default::default()
        },
    })
}

/// Builds and verifies a witness for any method pair. `base` is the
/// exponent base linking additive and multiplicative matrices.
pub fn construct_witness(req: &WitnessRequest, base: f64) -> Result<WitnessResult> {
    match req.pair {
        MethodPair::HodgeVsTropical => witness_hodge_tropical(req),
        MethodPair::HodgeVsPrincipal => witness_hodge_principal(req, base),
        MethodPair::TropicalVsPrincipal => witness_tropical_principal_with(req, base),
    }
}

/// Additive witness: Hodge ranking `sigma1`, tropical ranking `sigma2`.
///
/// Relabels the zero-Hodge base so its tropical ranking is `sigma2`, then
/// adds `ε W` for a strongly transitive `W` ranked `sigma1`, halving `ε`
/// until the tropical ranking survives.
pub fn witness_hodge_tropical(req: &WitnessRequest) -> Result<WitnessResult> {
    req.validate()?;
    let pair_req = WitnessRequest {
        pair: MethodPair::HodgeVsTropical,
        ..req.clone()
    };
    if req.sigma1 == req.sigma2 {
        return shortcut(&pair_req, std::f64::consts::E);
    }
    let (matrix, eps) = hodge_tropical_matrix(&pair_req)?;
    let verification = verify(&pair_req, &matrix, std::f64::consts::E)?;
    Ok(WitnessResult {
        request: pair_req,
        matrix,
        verification,
        parameters: WitnessParameters {
            epsilon: Some(eps),
            base: std::f64::consts::E,
            ..Default::default()
        },
    })
}

fn hodge_tropical_matrix(req: &WitnessRequest) -> Result<(ComparisonMatrix, f64)> {
    let base = base_hodge_zero_tropical_generic(req.n)?;
    let r = tropical_solve(&base).eigenvector.ranking(DEFAULT_TIE_TOL)?;
    let y = base.relabel(&r.mapping_to(&req.sigma2)?)?;
    let w = ComparisonMatrix::strongly_transitive_from_scores(&ScoreVector::additive(
        req.sigma1.canonical_scores(),
    )?)?;
    let hodge_req = WitnessRequest {
        pair: MethodPair::HodgeVsTropical,
        ..req.clone()
    };
    let mut eps = 1.0;
    for _ in 0..=60 {
        let b = y.combine(&w.scaled(eps))?;
        if verify(&hodge_req, &b, std::f64::consts::E).is_ok() {
            return Ok((b, eps));
        }
        eps /= 2.0;
    }
    Err(Error::ConstructionFailed("epsilon schedule exhausted".into()))
}

/// Multiplicative witness: Hodge ranking `sigma1`, principal ranking `sigma2`.
///
/// Takes the Hodge-vs-tropical witness `A` scaled to `max |A_ij| = 1` and
/// raises `exp_b(A)` to Hadamard powers `k = 1, 2, 4, ...` until the
/// principal ranking reaches the tropical one.
pub fn witness_hodge_principal(req: &WitnessRequest, base: f64) -> Result<WitnessResult> {
    req.validate()?;
    let lb = check_base(base)?;
    let pair_req = WitnessRequest {
        pair: MethodPair::HodgeVsPrincipal,
        ..req.clone()
    };
    if req.sigma1 == req.sigma2 {
        return shortcut(&pair_req, base);
    }
    let (a, eps) = hodge_tropical_matrix(&pair_req)?;
    let a = a.scaled(1.0 / a.max_abs());
    let mut k = 1.0;
    loop {
        if k * lb.abs() > 700.0 {
            return Err(Error::KExhausted(k));
        }
        let x = a.scaled(k).to_multiplicative(base)?;
        if let Ok(verification) = verify(&pair_req, &x, base) {
            return Ok(WitnessResult {
                request: pair_req,
                matrix: x,
                verification,
                parameters: WitnessParameters {
                    k: Some(k),
                    epsilon: Some(eps),
                    base,
                    ..Default::default()
                },
            });
        }
        k *= 2.0;
    }
}

/// Multiplicative witness: tropical ranking `sigma1`, principal ranking
/// `sigma2`, with `base = e`.
pub fn witness_tropical_principal(req: &WitnessRequest) -> Result<WitnessResult> {
    witness_tropical_principal_with(req, std::f64::consts::E)
}

/// As [`witness_tropical_principal`] for an arbitrary exponent base.
///
/// Starts from the perturbed matrix, whose tropical eigenvector is constant
/// and whose principal eigenvector is tie-free, relabelled so the principal
/// ranking is `sigma2`. Multiplying by `M^(k)` for a strongly transitive `M`
/// ranked `sigma1` fixes the tropical ranking at `sigma1` for every `k > 0`;
/// `k` is halved until the principal ranking is back at `sigma2`.
pub fn witness_tropical_principal_with(req: &WitnessRequest, base: f64) -> Result<WitnessResult> {
    req.validate()?;
    check_base(base)?;
    let pair_req = WitnessRequest {
        pair: MethodPair::TropicalVsPrincipal,
        ..req.clone()
    };
    if req.sigma1 == req.sigma2 {
        return shortcut(&pair_req, base);
    }
    let (spec, x) = tie_free_perturbed(req.n)?;
    let rv = principal_scores_with(&x, &PowerOptions::default())?
        .eigenvector
        .ranking(DEFAULT_TIE_TOL)?;
    let x = x.relabel(&rv.mapping_to(&req.sigma2)?)?;
    let m = ComparisonMatrix::strongly_transitive_from_scores(&ScoreVector::additive(
        req.sigma1.canonical_scores(),
    )?)?;
    let mut k = 1.0;
    for _ in 0..=60 {
        let y = x.combine(&m.scaled(k).to_multiplicative(base)?)?;
        if let Ok(verification) = verify(&pair_req, &y, base) {
            return Ok(WitnessResult {
                request: pair_req,
                matrix: y,
                verification,
                parameters: WitnessParameters {
                    k: Some(k),
                    l: Some(spec.l.to_string()),
                    delta: Some(spec.delta.iter().map(|d| d.to_string()).collect()),
                    base,
                    ..Default::default()
                },
            });
        }
        k /= 2.0;
    }
    Err(Error::KExhausted(k * 2.0))
}

/// Default perturbed matrix, moving to larger `L` if its principal
/// eigenvector is nearly tied.
fn tie_free_perturbed(n: usize) -> Result<(PerturbedSpec, ComparisonMatrix)> {
    for l in 2..=8 {
        let spec = PerturbedSpec::default_for(n, Rational64::from_integer(l))?;
        let x = perturbed_matrix(&spec)?;
        let v = principal_scores_with(&x, &PowerOptions::default())?.eigenvector;
        if guarded(&v).is_ok() {
            return Ok((spec, x));
        }
    }
    Err(Error::ConstructionFailed("perturbed matrix has tied principal scores".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk(s: &str) -> Ranking {
        s.parse().unwrap()
    }

    #[test]
    fn pair_names() {
        assert_eq!("hodge-tropical".parse::<MethodPair>().unwrap(), MethodPair::HodgeVsTropical);
        assert_eq!(MethodPair::TropicalVsPrincipal.to_string(), "tropical-principal");
        assert!("hodge-hodge".parse::<MethodPair>().is_err());
    }

    #[test]
    fn rejects_three_items() {
        let r = WitnessRequest::new(3, MethodPair::HodgeVsTropical, rk("1,2,3"), rk("3,2,1"));
        assert!(matches!(r, Err(Error::InvalidRequest(_))));
    }

    #[test]
    fn opposite_rankings_all_pairs() {
        for pair in MethodPair::ALL {
            let req = WitnessRequest::new(4, pair, rk("1,2,3,4"), rk("4,3,2,1")).unwrap();
            let w = construct_witness(&req, std::f64::consts::E).unwrap();
            assert!(!w.parameters.shortcut);
            let again = verify(&req, &w.matrix, std::f64::consts::E).unwrap();
            assert_eq!(again, w.verification);
        }
    }

    #[test]
    fn equal_rankings_take_shortcut() {
        for pair in MethodPair::ALL {
            let req = WitnessRequest::new(5, pair, rk("2,5,1,3,4"), rk("2,5,1,3,4")).unwrap();
            let w = construct_witness(&req, 2.0).unwrap();
            assert!(w.parameters.shortcut);
            assert!(w.matrix.is_strongly_transitive(1e-9));
        }
    }
}
