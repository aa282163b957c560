//! Slow, independent reference implementations used to check the library.

use pairank::matrix::{pair_count, pairs};
use pairank::{ComparisonMatrix, Scale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Additive matrix with i.i.d. N(0, sd) upper-triangle entries.
pub fn random_additive(n: usize, sd: f64, rng: &mut impl Rng) -> ComparisonMatrix {
    let normal = Normal::new(0.0, sd).unwrap();
    let vals: Vec<f64> = (0..pair_count(n)).map(|_| normal.sample(rng)).collect();
    let mut it = vals.into_iter();
    let mut up = vec![0.0; n * n];
    for (i, j) in pairs(n) {
        up[i * n + j] = it.next().unwrap();
    }
    ComparisonMatrix::additive_from_upper(n, |i, j| up[i * n + j]).unwrap()
}

/// Multiplicative matrix whose natural logs are N(0, sd).
pub fn random_mpcm(n: usize, sd: f64, rng: &mut impl Rng) -> ComparisonMatrix {
    random_additive(n, sd, rng)
        .to_multiplicative(std::f64::consts::E)
        .unwrap()
}

pub fn random_scores(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()
}

/// The matrix printed in the worked four-item example (rounded entries).
pub fn example_rows() -> Vec<Vec<f64>> {
    vec![
        vec![1.0, 1.57, 0.72, 0.70],
        vec![0.63, 1.0, 1.52, 0.65],
        vec![1.38, 0.65, 1.0, 1.57],
        vec![1.45, 1.52, 0.63, 1.0],
    ]
}

pub fn example_matrix() -> ComparisonMatrix {
    ComparisonMatrix::from_rows(&example_rows(), Scale::Multiplicative, 0.05).unwrap()
}

/// Every simple directed cycle of length `>= 2`, each listed once with its
/// smallest vertex first.
pub fn simple_cycles(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if path.len() >= 2 {
            out.push(path.clone());
        }
        for v in path[0] + 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                extend(n, path, used, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut used = vec![false; n];
        used[s] = true;
        extend(n, &mut vec![s], &mut used, &mut out);
    }
    out
}

pub fn cycle_mean(a: &ComparisonMatrix, c: &[usize]) -> f64 {
    let k = c.len();
    (0..k).map(|p| a.get(c[p], c[(p + 1) % k])).sum::<f64>() / k as f64
}

/// Maximum cycle mean by exhaustive enumeration (self-loops have mean 0).
pub fn brute_force_lambda(a: &ComparisonMatrix) -> f64 {
    let a = a.log_form();
    simple_cycles(a.n())
        .iter()
        .map(|c| cycle_mean(&a, c))
        .fold(0.0, f64::max)
}

/// Solves a dense linear system by Gaussian elimination with partial pivoting.
pub fn solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    x
}

/// Least-squares strongly transitive fit via the normal equations on the row
/// vectors `t_1..t_{n-1}`; returns the sum-zero score vector.
pub fn least_squares_scores(a: &ComparisonMatrix) -> Vec<f64> {
    let n = a.n();
    let t = pairank::geometry::t_basis(n);
    let up = a.upper_triangle().unwrap();
    let k = n - 1;
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| pairank::geometry::dot(&t[i], &t[j]) as f64).collect())
        .collect();
    let rhs: Vec<f64> = (0..k)
        .map(|i| t[i].iter().zip(up.coords()).map(|(x, y)| *x as f64 * y).sum())
        .collect();
    let c = solve(gram, rhs);
    // projection P = sum c_i t_i, and P_ij = s_i - s_j with s sum-zero
    let mut p = vec![0.0; pair_count(n)];
    for (ci, ti) in c.iter().zip(&t) {
        for (pv, tv) in p.iter_mut().zip(ti) {
            *pv += ci * *tv as f64;
        }
    }
    let pm = ComparisonMatrix::from_upper_triangle(
        &pairank::UpperTriangleVector::new(n, p).unwrap(),
    )
    .unwrap();
    (0..n)
        .map(|i| pm.row(i).iter().sum::<f64>() / n as f64)
        .collect()
}

/// Power iteration on `X + tI`, with `t` the current Collatz-Wielandt lower
/// bound; stops once the lower and upper bounds on the Perron value meet.
/// First component one on return.
pub fn naive_perron(x: &ComparisonMatrix) -> (f64, Vec<f64>) {
    let n = x.n();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let xv: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| x.get(i, j) * v[j]).sum())
            .collect();
        let ratios = xv.iter().zip(&v).map(|(a, b)| a / b);
        let lo = ratios.clone().fold(f64::INFINITY, f64::min);
        let hi = ratios.fold(0.0, f64::max);
        lambda = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * hi {
            break;
        }
        let w: Vec<f64> = xv.iter().zip(&v).map(|(a, b)| a + lo * b).collect();
        let s: f64 = w.iter().sum();
        v = w.iter().map(|y| y / s).collect();
    }
    (lambda, v.iter().map(|y| y / v[0]).collect())
}

/// `max_i |max_j (A_ij + m_j) - lambda - m_i|`.
pub fn maxplus_residual(a: &ComparisonMatrix, lambda: f64, m: &[f64]) -> f64 {
    let n = a.n();
    (0..n)
        .map(|i| {
            let best = (0..n).map(|j| a.get(i, j) + m[j]).fold(f64::NEG_INFINITY, f64::max);
            (best - lambda - m[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Number of discordant pairs, by enumeration.
pub fn discordant_pairs(a: &[usize], b: &[usize]) -> usize {
    let pos = |r: &[usize], x: usize| r.iter().position(|&y| y == x).unwrap();
    let n = a.len();
    let mut d = 0;
    for x in 0..n {
        for y in x + 1..n {
            let sa = pos(a, x) < pos(a, y);
            let sb = pos(b, x) < pos(b, y);
            if sa != sb {
                d += 1;
            }
        }
    }
    d
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Max difference after removing the mean of the difference.
pub fn max_diff_up_to_constant(a: &[f64], b: &[f64]) -> f64 {
    let shift = a.iter().zip(b).map(|(x, y)| x - y).sum::<f64>() / a.len() as f64;
    a.iter().zip(b).map(|(x, y)| (x - y - shift).abs()).fold(0.0, f64::max)
}

/// Uniformly random ranking of `n` items, 0-based order.
pub fn random_order(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Items sorted by decreasing score.
pub fn order_desc(scores: &[f64]) -> Vec<usize> {
    let mut v: Vec<usize> = (0..scores.len()).collect();
    v.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    v
}
