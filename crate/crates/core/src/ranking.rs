//! Score vectors, permutations and the strict rankings they induce.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Scale;

/// Default relative tie tolerance for [`rank_of`].
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// A permutation of `0..n`, stored as its image vector: `tau(i) = images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(
                "1-based images must be positive".into(),
            ));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// Builds a permutation of `0..n` from a single cycle written with
    /// 1-based labels, e.g. `(4 2 3)` maps 4 to 2, 2 to 3 and 3 to 4.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for (pos, &a) in cycle.iter().enumerate() {
            let b = cycle[(pos + 1) % cycle.len()];
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidPermutation(format!(
                    "cycle {cycle:?} has labels outside 1..={n}"
                )));
            }
            images[a - 1] = b - 1;
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &t) in self.images.iter().enumerate() {
            inv[t] = i;
        }
        Self { images: inv }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Self {
        Self {
            images: first.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self {
                images: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Permutes a vector so that `out[tau(i)] = v[i]`.
    pub fn permute_vec<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.images[i]] = x.clone();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A strict ranking: items listed from best to worst.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    /// Builds a ranking from 0-based items, best first.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        Permutation::from_images(order.clone())
            .map_err(|_| Error::InvalidPermutation(format!("{order:?} is not a ranking")))?;
        Ok(Self { order })
    }

    /// Builds a ranking from 1-based items, best first.
    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::InvalidPermutation(
                "ranking items are 1-based".into(),
            ));
        }
        Self::new(order.iter().map(|&x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Items best to worst, 0-based.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|&x| x + 1).collect()
    }

    /// `positions()[item]` is the 0-based rank of `item`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (r, &item) in self.order.iter().enumerate() {
            pos[item] = r;
        }
        pos
    }

    /// The ranking after items are relabelled by `tau`.
    pub fn relabel(&self, tau: &Permutation) -> Self {
        Self {
            order: self.order.iter().map(|&i| tau.apply(i)).collect(),
        }
    }

    /// The permutation sending this ranking's `r`-th item to `target`'s
    /// `r`-th item, so that `self.relabel(&p) == *target`.
    pub fn mapping_to(&self, target: &Ranking) -> Result<Permutation> {
        if self.len() != target.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                actual: target.len(),
            });
        }
        let mut images = vec![0; self.len()];
        for (a, b) in self.order.iter().zip(&target.order) {
            images[*a] = *b;
        }
        Permutation::from_images(images)
    }

    /// Additive scores `n-1, n-2, ..., 0` in ranking order.
    pub fn canonical_scores(&self) -> Vec<f64> {
        let n = self.order.len();
        let mut s = vec![0.0; n];
        for (r, &item) in self.order.iter().enumerate() {
            s[item] = (n - 1 - r) as f64;
        }
        s
    }

    /// The reversed ranking.
    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self { order }
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" > "))
    }
}

impl std::str::FromStr for Ranking {
    type Err = Error;

    /// Parses `"3,4,1,2"` or `"3>4>1>2"` (1-based, best first).
    fn from_str(s: &str) -> Result<Self> {
        let items: std::result::Result<Vec<usize>, _> = s
            .split([',', '>'])
            .map(|t| t.trim().parse::<usize>())
            .collect();
        let items = items
            .map_err(|e| Error::InvalidPermutation(format!("cannot parse ranking {s:?}: {e}")))?;
        Self::from_one_based(&items)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    FirstComponentUnit,
    SumZero,
    None,
}

/// Real-valued item scores on an additive or multiplicative scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub values: Vec<f64>,
    pub scale: Scale,
    pub normalization: Normalization,
}

impl ScoreVector {
    pub fn additive(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidScores("non-finite score".into()));
        }
        Ok(Self {
            values,
            scale: Scale::Additive,
            normalization: Normalization::None,
        })
    }

    pub fn multiplicative(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidScores(
                "multiplicative scores must be finite and positive".into(),
            ));
        }
        Ok(Self {
            values,
            scale: Scale::Multiplicative,
            normalization: Normalization::None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum-zero for additive scores, first-component-one for multiplicative.
    pub fn normalized(&self) -> Self {
        match self.scale {
            Scale::Additive => self.sum_zero(),
            Scale::Multiplicative => self.first_unit(),
        }
    }

    /// Additive: subtract the mean. Multiplicative: divide by the geometric mean.
    pub fn sum_zero(&self) -> Self {
        let values = match self.scale {
            Scale::Additive => {
                let mean = self.values.iter().sum::<f64>() / self.len() as f64;
                self.values.iter().map(|v| v - mean).collect()
            }
            Scale::Multiplicative => {
                let lmean = self.values.iter().map(|v| v.ln()).sum::<f64>() / self.len() as f64;
                self.values.iter().map(|v| (v.ln() - lmean).exp()).collect()
            }
        };
        Self {
            values,
            scale: self.scale,
            normalization: Normalization::SumZero,
        }
    }

    /// Additive: first component zero. Multiplicative: first component one.
    pub fn first_unit(&self) -> Self {
        let values = match self.scale {
            Scale::Additive => self.values.iter().map(|v| v - self.values[0]).collect(),
            Scale::Multiplicative => self.values.iter().map(|v| v / self.values[0]).collect(),
        };
        Self {
            values,
            scale: self.scale,
            normalization: Normalization::FirstComponentUnit,
        }
    }

    /// Scores on the additive scale (natural log for multiplicative input).
    pub fn log_values(&self) -> Vec<f64> {
        match self.scale {
            Scale::Additive => self.values.clone(),
            Scale::Multiplicative => self.values.iter().map(|v| v.ln()).collect(),
        }
    }

    /// Induced ranking; ties are judged on the additive scale.
    pub fn ranking(&self, tie_tol: f64) -> Result<Ranking> {
        rank_of(&self.log_values(), tie_tol)
    }

    /// Relabels items: `out[tau(i)] = self[i]`.
    pub fn permuted(&self, tau: &Permutation) -> Self {
        Self {
            values: tau.permute_vec(&self.values),
            scale: self.scale,
            normalization: self.normalization,
        }
    }
}

/// Sorts items by strictly decreasing score.
///
/// Two scores closer than `tie_tol * (max - min)` are a tie, reported as
/// [`Error::TieDetected`] with 1-based items.
pub fn rank_of(w: &[f64], tie_tol: f64) -> Result<Ranking> {
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidScores("non-finite score".into()));
    }
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    if w.len() >= 2 {
        let spread = w[order[0]] - w[order[w.len() - 1]];
        let thresh = tie_tol * spread;
        for pair in order.windows(2) {
            let gap = w[pair[0]] - w[pair[1]];
            if gap <= thresh {
                let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                return Err(Error::TieDetected(a + 1, b + 1));
            }
        }
    }
    Ok(Ranking { order })
}

/// Smallest gap between consecutive sorted scores, relative to their spread.
pub fn relative_min_gap(w: &[f64]) -> f64 {
    let mut s = w.to_vec();
    s.sort_by(f64::total_cmp);
    let spread = s[s.len() - 1] - s[0];
    if spread == 0.0 {
        return 0.0;
    }
    s.windows(2)
        .map(|p| p[1] - p[0])
        .fold(f64::INFINITY, f64::min)
        / spread
}
