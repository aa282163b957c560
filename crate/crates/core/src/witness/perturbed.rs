use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComparisonMatrix, Scale, DEFAULT_RECIPROCITY_TOL};
use crate::methods::{principal_scores_with, tropical_solve, PowerOptions};
use crate::ranking::{Normalization, ScoreVector};

/// Parameters of the perturbed consistent matrix: scores `s_i = 1` for
/// `i < n` and `s_n = 1/L`, with the first row multiplied by `δ_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedSpec {
    pub n: usize,
    pub l: Rational64,
    /// `(δ_2, ..., δ_n)`.
    pub delta: Vec<Rational64>,
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl PerturbedSpec {
    /// `δ_i = 1 + (i - 1)(L - 1)/(n - 2)` for `2 <= i <= n - 1`, `δ_n = 1/L²`.
    pub fn default_for(n: usize, l: Rational64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSpec(format!("need n >= 3, got {n}")));
        }
        let one = Rational64::from_integer(1);
        let mut delta: Vec<Rational64> = (2..n)
            .map(|i| one + Rational64::from_integer(i as i64 - 1) * (l - one) / (n as i64 - 2))
            .collect();
        delta.push(one / (l * l));
        let spec = Self { n, l, delta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let one = Rational64::from_integer(1);
        if n < 3 {
            return Err(Error::InvalidSpec(format!("need n >= 3, got {n}")));
        }
        if self.delta.len() != n - 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} deltas, got {}",
                n - 1,
                self.delta.len()
            )));
        }
        if self.l <= one {
            return Err(Error::InvalidSpec(format!("L must exceed 1, got {}", self.l)));
        }
        if self.delta.iter().any(|d| *d <= Rational64::from_integer(0)) {
            return Err(Error::InvalidSpec("deltas must be positive".into()));
        }
        let inner = &self.delta[..n - 2];
        if inner.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("deltas must increase strictly".into()));
        }
        if inner[inner.len() - 1] != self.l {
            return Err(Error::InvalidSpec("δ_{n-1} must equal L".into()));
        }
        if self.delta[n - 2] != one / (self.l * self.l) {
            return Err(Error::InvalidSpec("δ_n must equal 1/L²".into()));
        }
        Ok(())
    }

    /// `δ_i` for 1-based `i` in `2..=n`.
    fn d(&self, i: usize) -> Rational64 {
        self.delta[i - 2]
    }
}

/// The matrix entries in exact arithmetic.
pub fn perturbed_matrix_exact(spec: &PerturbedSpec) -> Result<Vec<Vec<Rational64>>> {
    spec.validate()?;
    let n = spec.n;
    let one = Rational64::from_integer(1);
    let s = |i: usize| if i == n { one / spec.l } else { one };
    let mut x = vec![vec![one; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            x[i - 1][j - 1] = if i == j {
                one
            } else if i == 1 {
                spec.d(j) * s(1) / s(j)
            } else if j == 1 {
                s(i) / (spec.d(i) * s(1))
            } else {
                s(i) / s(j)
            };
        }
    }
    Ok(x)
}

/// The perturbed matrix as a multiplicative comparison matrix. Its tropical
/// eigenvector is checked to be constant.
pub fn perturbed_matrix(spec: &PerturbedSpec) -> Result<ComparisonMatrix> {
    let exact = perturbed_matrix_exact(spec)?;
    let rows: Vec<Vec<f64>> = exact.iter().map(|r| r.iter().copied().map(to_f64).collect()).collect();
    let x = ComparisonMatrix::from_rows(&rows, Scale::Multiplicative, DEFAULT_RECIPROCITY_TOL)?;
    let m = tropical_solve(&x).eigenvector;
    let spread = m.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if spread > 1e-12 {
        return Err(Error::InvalidSpec(format!(
            "tropical eigenvector is not constant (spread {spread:e})"
        )));
    }
    Ok(x)
}

/// Closed-form principal eigenpair of the perturbed matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedClosedForm {
    pub a: Rational64,
    pub b: Rational64,
    pub c: Rational64,
    /// Largest root of `t³ - n t² + b(n-1) - ac`.
    pub r: f64,
    pub alpha: [f64; 3],
    /// Multiplicative, first component one.
    pub v: ScoreVector,
    /// Largest componentwise deviation from power iteration, both first-one.
    pub power_iteration_deviation: f64,
}

pub fn perturbed_closed_form(spec: &PerturbedSpec) -> Result<PerturbedClosedForm> {
    spec.validate()?;
    let n = spec.n;
    let one = Rational64::from_integer(1);
    let (mut a, mut b, mut c) = (Rational64::from_integer(0), Rational64::from_integer(0), Rational64::from_integer(0));
    for &d in &spec.delta {
        a += d - one;
        b += (d - one) * (one / d - one);
        c += one / d - one;
    }
    let nf = n as f64;
    let k = to_f64(b * Rational64::from_integer(n as i64 - 1) - a * c);
    let p = |t: f64| t * t * t - nf * t * t + k;
    let dp = |t: f64| 3.0 * t * t - 2.0 * nf * t;

    // Newton from the right of every root: p is increasing and convex there.
    let mut r = nf + 1.0 + k.abs().cbrt();
    for _ in 0..200 {
        let step = p(r) / dp(r);
        r -= step;
        if step.abs() <= 1e-15 * r.abs() {
            break;
        }
    }
    // remaining roots solve t² + (r - n) t + r (r - n) = 0
    let (pb, pc) = (r - nf, r * (r - nf));
    let disc = pb * pb - 4.0 * pc;
    let other = if disc < 0.0 {
        pc.sqrt()
    } else {
        ((-pb).abs() + disc.sqrt()) / 2.0
    };
    if other >= r.abs() * (1.0 - 1e-9) {
        return Err(Error::RootNotSeparated(r.abs(), other));
    }

    let cf = to_f64(c);
    let alpha = [(r - nf) * r - cf, r + cf, r - nf + 1.0];
    let lf = to_f64(spec.l);
    let mut v = Vec::with_capacity(n);
    v.push(alpha[2] * r);
    for i in 2..n {
        v.push(alpha[1] + alpha[2] * (1.0 / to_f64(spec.d(i)) - 1.0));
    }
    v.push(alpha[1] / lf + alpha[2] * (lf * lf - 1.0) / lf);
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::VerificationFailed(format!("closed-form vector {v:?} is not positive")));
    }
    let v: Vec<f64> = v.iter().map(|x| x / v[0]).collect();

    let x = perturbed_matrix(spec)?;
    let pi = principal_scores_with(&x, &PowerOptions::default())?;
    let dev = v
        .iter()
        .zip(&pi.eigenvector.values)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    if dev > 1e-8 {
        return Err(Error::VerificationFailed(format!(
            "closed form deviates from power iteration by {dev:e}"
        )));
    }
    Ok(PerturbedClosedForm {
        a,
        b,
        c,
        r,
        alpha,
        v: ScoreVector {
            values: v,
            scale: Scale::Multiplicative,
            normalization: Normalization::FirstComponentUnit,
        },
        power_iteration_deviation: dev,
    })
}
