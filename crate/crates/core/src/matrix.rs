//! Paired comparison matrices on the additive (skew-symmetric) and
//! multiplicative (positive reciprocal) scales.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::{Permutation, ScoreVector};

/// Default tolerance for the reciprocity check performed by constructors.
pub const DEFAULT_RECIPROCITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Additive,
    Multiplicative,
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scale::Additive => "additive",
            Scale::Multiplicative => "multiplicative",
        })
    }
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "additive" | "apcm" => Ok(Scale::Additive),
            "multiplicative" | "mpcm" => Ok(Scale::Multiplicative),
            other => Err(Error::InvalidMatrix(format!("unknown scale {other:?}"))),
        }
    }
}

/// Exponent base for the log/exp correspondence between the two scales.
pub fn check_base(base: f64) -> Result<f64> {
    if !(base.is_finite() && base > 0.0 && base != 1.0) {
        return Err(Error::InvalidMatrix(format!(
            "exponent base must be positive and != 1, got {base}"
        )));
    }
    Ok(base.ln())
}

/// Number of strictly-upper-triangular coordinates of an `n x n` matrix.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Row-major index of the pair `(i, j)`, `i < j`, among upper coordinates.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Pairs `(i, j)`, `i < j`, in row-major upper-triangle order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// The vector `(A12, A13, ..., A1n, A23, ...)` of an additive matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperTriangleVector {
    n: usize,
    coords: Vec<f64>,
}

impl UpperTriangleVector {
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::SizeMismatch {
                expected: pair_count(n),
                actual: coords.len(),
            });
        }
        Ok(Self { n, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.coords.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// An `n x n` paired comparison matrix.
///
/// Additive matrices are exactly skew-symmetric; multiplicative matrices are
/// positive with unit diagonal and reciprocal off-diagonal pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMatrix {
    n: usize,
    entries: Vec<f64>,
    scale: Scale,
}

impl ComparisonMatrix {
    /// Validates `rows` against the scale's invariants within `recip_tol`,
    /// then restores exact reciprocity.
    ///
    /// Additive pairs are replaced by `(A_ij - A_ji) / 2`; multiplicative
    /// pairs by `sqrt(X_ij / X_ji)`.
    pub fn from_rows(rows: &[Vec<f64>], scale: Scale, recip_tol: f64) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidMatrix(format!("need at least 2 items, got {n}")));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) is not finite",
                    i + 1,
                    j + 1
                )));
            }
        }
        let mut entries = vec![0.0; n * n];
        match scale {
            Scale::Additive => {
                for i in 0..n {
                    if rows[i][i].abs() > recip_tol {
                        return Err(Error::InvalidMatrix(format!(
                            "diagonal entry ({0}, {0}) = {1} is not zero",
                            i + 1,
                            rows[i][i]
                        )));
                    }
                    for j in i + 1..n {
                        let (a, b) = (rows[i][j], rows[j][i]);
                        if (a + b).abs() > recip_tol * 1f64.max(a.abs()).max(b.abs()) {
                            return Err(Error::InvalidMatrix(format!(
                                "entries ({0}, {1}) = {a} and ({1}, {0}) = {b} are not skew-symmetric",
                                i + 1,
                                j + 1
                            )));
                        }
                        let v = 0.5 * (a - b);
                        entries[i * n + j] = v;
                        entries[j * n + i] = -v;
                    }
                }
            }
            Scale::Multiplicative => {
                for i in 0..n {
                    if (rows[i][i] - 1.0).abs() > recip_tol {
                        return Err(Error::InvalidMatrix(format!(
                            "diagonal entry ({0}, {0}) = {1} is not one",
                            i + 1,
                            rows[i][i]
                        )));
                    }
                    entries[i * n + i] = 1.0;
                    for j in i + 1..n {
                        let (a, b) = (rows[i][j], rows[j][i]);
                        if a <= 0.0 || b <= 0.0 {
                            return Err(Error::InvalidMatrix(format!(
                                "entries ({0}, {1}) and ({1}, {0}) must be positive",
                                i + 1,
                                j + 1
                            )));
                        }
                        if (a * b - 1.0).abs() > recip_tol {
                            return Err(Error::InvalidMatrix(format!(
                                "entries ({0}, {1}) = {a} and ({1}, {0}) = {b} are not reciprocal",
                                i + 1,
                                j + 1
                            )));
                        }
                        entries[i * n + j] = (a / b).sqrt();
                        entries[j * n + i] = (b / a).sqrt();
                    }
                }
            }
        }
        Ok(Self { n, entries, scale })
    }

    /// Additive matrix with `A_ij = upper(i, j)` for `i < j`, mirrored exactly.
    pub fn additive_from_upper(n: usize, upper: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMatrix(format!("need at least 2 items, got {n}")));
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = upper(i, j);
                if !v.is_finite() {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) is not finite",
                        i + 1,
                        j + 1
                    )));
                }
                entries[i * n + j] = v;
                entries[j * n + i] = -v;
            }
        }
        Ok(Self {
            n,
            entries,
            scale: Scale::Additive,
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
            scale: Scale::Additive,
        }
    }

    /// The all-ones multiplicative matrix.
    pub fn ones(n: usize) -> Self {
        Self {
            n,
            entries: vec![1.0; n * n],
            scale: Scale::Multiplicative,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn scale(&self) -> Scale {
        self.scale
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    fn require(&self, scale: Scale) -> Result<()> {
        if self.scale != scale {
            return Err(Error::InvalidMatrix(format!(
                "expected a {scale} matrix, got {}",
                self.scale
            )));
        }
        Ok(())
    }

    /// `A_ij = log_b X_ij`.
    pub fn to_additive(&self, base: f64) -> Result<Self> {
        self.require(Scale::Multiplicative)?;
        let lb = check_base(base)?;
        if self.entries.iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidMatrix("non-positive entry".into()));
        }
        Self::additive_from_upper(self.n, |i, j| self.get(i, j).ln() / lb)
    }

    /// `X_ij = b^(A_ij)`.
    pub fn to_multiplicative(&self, base: f64) -> Result<Self> {
        self.require(Scale::Additive)?;
        let lb = check_base(base)?;
        let entries: Vec<f64> = self.entries.iter().map(|a| (a * lb).exp()).collect();
        if entries.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::InvalidMatrix(
                "exponentiated entry overflows or underflows".into(),
            ));
        }
        Ok(Self {
            n: self.n,
            entries,
            scale: Scale::Multiplicative,
        })
    }

    /// Natural-log additive form; additive input is returned unchanged.
    pub fn log_form(&self) -> Self {
        match self.scale {
            Scale::Additive => self.clone(),
            Scale::Multiplicative => {
                Self::additive_from_upper(self.n, |i, j| self.get(i, j).ln())
                    .expect("positive entries have finite logs")
            }
        }
    }

    /// `Y[tau(i)][tau(j)] = A[i][j]`.
    pub fn relabel(&self, tau: &Permutation) -> Result<Self> {
        if tau.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: tau.len(),
            });
        }
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[tau.apply(i) * n + tau.apply(j)] = self.entries[i * n + j];
            }
        }
        Ok(Self {
            n,
            entries,
            scale: self.scale,
        })
    }

    /// `c * A` for additive matrices, `X^(c)` (Hadamard power) for multiplicative.
    pub fn scaled(&self, c: f64) -> Self {
        let entries = match self.scale {
            Scale::Additive => self.entries.iter().map(|a| c * a).collect(),
            Scale::Multiplicative => self.entries.iter().map(|x| x.powf(c)).collect(),
        };
        Self {
            n: self.n,
            entries,
            scale: self.scale,
        }
    }

    /// `A + B` for additive matrices, `X ∘ Y` (Hadamard product) for multiplicative.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        other.require(self.scale)?;
        let entries = match self.scale {
            Scale::Additive => self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            Scale::Multiplicative => self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        };
        Ok(Self {
            n: self.n,
            entries,
            scale: self.scale,
        })
    }

    /// `A - B` for additive matrices.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.require(Scale::Additive)?;
        self.combine(&other.scaled(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Squared Euclidean norm of the upper-triangle vector.
    pub fn norm_sq(&self) -> f64 {
        pairs(self.n)
            .into_iter()
            .map(|(i, j)| self.get(i, j).powi(2))
            .sum()
    }

    pub fn upper_triangle(&self) -> Result<UpperTriangleVector> {
        self.require(Scale::Additive)?;
        let coords = pairs(self.n)
            .into_iter()
            .map(|(i, j)| self.get(i, j))
            .collect();
        UpperTriangleVector::new(self.n, coords)
    }

    pub fn from_upper_triangle(v: &UpperTriangleVector) -> Result<Self> {
        let n = v.n();
        Self::additive_from_upper(n, |i, j| v.coords()[pair_index(n, i, j)])
    }

    /// `A_ij = s_i - s_j`, or `X_ij = s_i / s_j` for multiplicative scores.
    pub fn strongly_transitive_from_scores(s: &ScoreVector) -> Result<Self> {
        let n = s.len();
        match s.scale {
            Scale::Additive => {
                if s.values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidScores("non-finite score".into()));
                }
                Self::additive_from_upper(n, |i, j| s.values[i] - s.values[j])
            }
            Scale::Multiplicative => {
                if s.values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                    return Err(Error::InvalidScores(
                        "multiplicative scores must be positive".into(),
                    ));
                }
                if n < 2 {
                    return Err(Error::InvalidMatrix(format!(
                        "need at least 2 items, got {n}"
                    )));
                }
                let mut entries = vec![1.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            entries[i * n + j] = s.values[i] / s.values[j];
                        }
                    }
                }
                Ok(Self {
                    n,
                    entries,
                    scale: Scale::Multiplicative,
                })
            }
        }
    }

    /// Largest violation of `A_ik = A_ij + A_jk` over all triples.
    pub fn transitivity_defect(&self) -> f64 {
        let a = self.log_form();
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((a.get(i, k) - a.get(i, j) - a.get(j, k)).abs());
                }
            }
        }
        worst
    }

    /// Multiplicative input is tested on its natural-log form.
    pub fn is_strongly_transitive(&self, tol: f64) -> bool {
        self.transitivity_defect() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
    }

    #[test]
    fn log_of_all_ones_is_zero() {
        let z = ComparisonMatrix::ones(4).to_additive(std::f64::consts::E).unwrap();
        assert_eq!(z, ComparisonMatrix::zeros(4));
    }

    #[test]
    fn base_two_and_ten_conversions() {
        let x = ComparisonMatrix::from_rows(
            &[vec![1.0, 2.0], vec![0.5, 1.0]],
            Scale::Multiplicative,
            DEFAULT_RECIPROCITY_TOL,
        )
        .unwrap();
        let a = x.to_additive(2.0).unwrap();
        assert_eq!(a.get(0, 1), 1.0);
        assert_eq!(a.get(1, 0), -1.0);

        let a = ComparisonMatrix::additive_from_upper(2, |_, _| 1.0).unwrap();
        let x = a.to_multiplicative(10.0).unwrap();
        assert!(close(x.get(0, 1), 10.0, 1e-15));
        assert!(close(x.get(1, 0), 0.1, 1e-15));
        assert!(ComparisonMatrix::zeros(3)
            .to_multiplicative(7.0)
            .unwrap()
            .rows()
            .iter()
            .flatten()
            .all(|&v| v == 1.0));
    }

    #[test]
    fn conversion_rejects_wrong_scale_and_bad_base() {
        assert!(ComparisonMatrix::zeros(3).to_additive(2.0).is_err());
        assert!(ComparisonMatrix::ones(3).to_additive(1.0).is_err());
        assert!(ComparisonMatrix::ones(3).to_additive(-2.0).is_err());
    }

    #[test]
    fn loader_checks_and_repairs_reciprocity() {
        let rows = vec![vec![1.0, 2.0], vec![0.49, 1.0]];
        assert!(ComparisonMatrix::from_rows(&rows, Scale::Multiplicative, 1e-9).is_err());
        let x = ComparisonMatrix::from_rows(&rows, Scale::Multiplicative, 0.05).unwrap();
        assert!(close(x.get(0, 1) * x.get(1, 0), 1.0, 1e-15));
        assert!(close(x.get(0, 1), (2.0f64 / 0.49).sqrt(), 1e-15));

        let neg = vec![vec![1.0, -2.0], vec![-0.5, 1.0]];
        assert!(ComparisonMatrix::from_rows(&neg, Scale::Multiplicative, 1.0).is_err());

        let ragged = vec![vec![0.0, 1.0], vec![-1.0]];
        assert!(ComparisonMatrix::from_rows(&ragged, Scale::Additive, 1e-9).is_err());

        let skew = vec![vec![0.0, 1.0], vec![-1.0 + 1e-12, 0.0]];
        let a = ComparisonMatrix::from_rows(&skew, Scale::Additive, 1e-9).unwrap();
        assert_eq!(a.get(0, 1), -a.get(1, 0));
    }

    #[test]
    fn relabel_transposition() {
        let a = ComparisonMatrix::additive_from_upper(2, |_, _| 3.0).unwrap();
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        let y = a.relabel(&swap).unwrap();
        assert_eq!(y.get(0, 1), -3.0);
        assert_eq!(a.relabel(&Permutation::identity(2)).unwrap(), a);
        assert!(a.relabel(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn strongly_transitive_constructor() {
        let s = ScoreVector::additive(vec![2.0, 1.0, 0.0]).unwrap();
        let a = ComparisonMatrix::strongly_transitive_from_scores(&s).unwrap();
        assert_eq!((a.get(0, 1), a.get(0, 2), a.get(1, 2)), (1.0, 2.0, 1.0));
        assert!(a.is_strongly_transitive(1e-12));
        assert!(ComparisonMatrix::zeros(3).is_strongly_transitive(0.0));
        let z = ComparisonMatrix::strongly_transitive_from_scores(
            &ScoreVector::additive(vec![0.0; 3]).unwrap(),
        )
        .unwrap();
        assert_eq!(z, ComparisonMatrix::zeros(3));

        let bad = ScoreVector {
            values: vec![1.0, -1.0],
            scale: Scale::Multiplicative,
            normalization: crate::ranking::Normalization::None,
        };
        assert!(ComparisonMatrix::strongly_transitive_from_scores(&bad).is_err());
    }

    #[test]
    fn three_cycle_breaks_transitivity() {
        // A12 = A23 = 1 with A13 = 2 is consistent; bumping A13 by one is not.
        let ok = ComparisonMatrix::additive_from_upper(3, |i, j| match (i, j) {
            (0, 2) => 2.0,
            _ => 1.0,
        })
        .unwrap();
        assert!(ok.is_strongly_transitive(1e-9));
        let bad = ComparisonMatrix::additive_from_upper(3, |i, j| match (i, j) {
            (0, 2) => 3.0,
            _ => 1.0,
        })
        .unwrap();
        assert!(!bad.is_strongly_transitive(1e-9));
    }

    #[test]
    fn upper_triangle_packing() {
        assert_eq!(
            ComparisonMatrix::zeros(4).upper_triangle().unwrap().coords(),
            &[0.0; 6]
        );
        let a = ComparisonMatrix::additive_from_upper(4, |i, j| {
            if (i, j) == (0, 1) {
                5.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(
            a.upper_triangle().unwrap().coords(),
            &[5.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(pair_index(4, 2, 3), 5);
        assert_eq!(pair_index(5, 1, 4), 6);
        assert!(UpperTriangleVector::new(4, vec![0.0; 5]).is_err());
    }
}
