//! Closed-form tropical eigenpairs for four items.
//!
//! With `F_i = <f_i, A>` for the three 4-cycle vectors below, the tropical
//! eigenvalue and `m(A) - h(A)` are linear in `(F_1, F_2, F_3)` on each of 48
//! open cones. Two seed cones are stored; the rest are their images under
//! relabelling.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::cycles::CycleVector;
use crate::error::{Error, Result};
use crate::matrix::{ComparisonMatrix, Scale};
use crate::methods::{hodge_scores, TropicalSolution};
use crate::ranking::{Normalization, Permutation, ScoreVector};

/// Default boundary margin, relative to `max |R_ij|` of the cyclic part.
pub const BOUNDARY_MARGIN: f64 = 1e-7;

/// `s((1 2 3 4))`, `s((1 3 4 2))`, `s((1 4 2 3))`.
pub fn f_basis4() -> [CycleVector; 3] {
    [
        CycleVector::from_one_based(4, &[1, 2, 3, 4]).unwrap(),
        CycleVector::from_one_based(4, &[1, 3, 4, 2]).unwrap(),
        CycleVector::from_one_based(4, &[1, 4, 2, 3]).unwrap(),
    ]
}

/// `(<f_1, A>, <f_2, A>, <f_3, A>)`.
pub fn f_values(a: &ComparisonMatrix) -> [f64; 3] {
    let f = f_basis4();
    [f[0].value(a), f[1].value(a), f[2].value(a)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Facet {
    /// A 3-cycle is critical.
    Hexagon { cycle: Vec<usize> },
    /// A 4-cycle is critical.
    Square { cycle: Vec<usize> },
}

impl Facet {
    pub fn cycle(&self) -> &[usize] {
        match self {
            Facet::Hexagon { cycle } | Facet::Square { cycle } => cycle,
        }
    }

    fn relabel(&self, tau: &Permutation) -> Self {
        let c = self.cycle().iter().map(|&v| tau.apply(v)).collect();
        match self {
            Facet::Hexagon { .. } => Facet::Hexagon { cycle: c },
            Facet::Square { .. } => Facet::Square { cycle: c },
        }
    }
}

/// `coeffs . (F_1, F_2, F_3) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub coeffs: [i64; 3],
}

impl Inequality {
    pub fn slack(&self, f: &[f64; 3]) -> f64 {
        self.coeffs
            .iter()
            .zip(f)
            .map(|(&c, x)| c as f64 * x)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionId {
    /// Hexagon region next to the `2 F_1 = F_2 + F_3` line.
    R1,
    /// Square region of `f_1` adjacent to `R1`.
    Green,
}

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegionId::R1 => "r1",
            RegionId::Green => "green",
        })
    }
}

/// One canonical cone with its closed-form eigenpair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region4 {
    pub id: RegionId,
    /// Critical cycle, 0-based, in canonical labels.
    pub facet: Facet,
    pub inequalities: Vec<Inequality>,
    /// `m - h = (1/12) C F`; entries of `C` in twelfths.
    pub coeff_twelfths: [[i64; 3]; 4],
    /// `lambda = (1/12) l . F`.
    pub lambda_twelfths: [i64; 3],
}

impl Region4 {
    pub fn r1() -> Self {
        Self {
            id: RegionId::R1,
            facet: Facet::Hexagon {
                cycle: vec![1, 2, 3],
            },
            inequalities: [
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [-1, 2, 2],
                [1, -2, 1],
                [2, -1, -1],
            ]
            .into_iter()
            .map(|coeffs| Inequality { coeffs })
            .collect(),
            coeff_twelfths: [[0, 0, 0], [-1, 5, 2], [-2, 7, 1], [-3, 6, 3]],
            lambda_twelfths: [2, 2, 2],
        }
    }

    pub fn green() -> Self {
        Self {
            id: RegionId::Green,
            facet: Facet::Square {
                cycle: vec![0, 1, 2, 3],
            },
            inequalities: [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -2, -2]]
                .into_iter()
                .map(|coeffs| Inequality { coeffs })
                .collect(),
            coeff_twelfths: [[0, 0, 0], [0, 3, 0], [0, 3, -3], [0, 0, -3]],
            lambda_twelfths: [3, 0, 0],
        }
    }

    pub fn seeds() -> [Region4; 2] {
        [Self::r1(), Self::green()]
    }

    /// `C` as exact rationals.
    pub fn coeff(&self) -> [[Rational64; 3]; 4] {
        self.coeff_twelfths
            .map(|row| row.map(|c| Rational64::new(c, 12)))
    }

    /// Smallest slack over the defining inequalities.
    pub fn min_slack(&self, f: &[f64; 3]) -> f64 {
        self.inequalities
            .iter()
            .map(|q| q.slack(f))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn lambda(&self, f: &[f64; 3]) -> f64 {
        self.lambda_twelfths
            .iter()
            .zip(f)
            .map(|(&c, x)| c as f64 * x)
            .sum::<f64>()
            / 12.0
    }

    /// `(1/12) C F`.
    pub fn offset(&self, f: &[f64; 3]) -> [f64; 4] {
        self.coeff_twelfths.map(|row| {
            row.iter().zip(f).map(|(&c, x)| c as f64 * x).sum::<f64>() / 12.0
        })
    }
}

/// Result of locating a 4x4 matrix among the 48 cones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// The canonical cone containing `relabel(A, tau)`.
    pub region: Region4,
    pub tau: Permutation,
    /// `F` values of `relabel(A, tau)`.
    pub f_values: [f64; 3],
    /// Smallest inequality slack, in the units of `F`.
    pub slack: f64,
}

impl Classification {
    /// The critical cycle in the labels of the original matrix, 0-based,
    /// starting at its smallest vertex.
    pub fn critical_cycle(&self) -> Vec<usize> {
        let mut c = self.region.facet.relabel(&self.tau.inverse()).cycle().to_vec();
        let start = (0..c.len()).min_by_key(|&p| c[p]).unwrap_or(0);
        c.rotate_left(start);
        c
    }
}

fn require4(a: &ComparisonMatrix) -> Result<()> {
    if a.n() != 4 {
        return Err(Error::SizeMismatch {
            expected: 4,
            actual: a.n(),
        });
    }
    if a.scale() != Scale::Additive {
        return Err(Error::InvalidMatrix("expected an additive matrix".into()));
    }
    Ok(())
}

fn cyclic_size(a: &ComparisonMatrix) -> Result<f64> {
    let (_, r) = super::project_components(a)?;
    Ok(r.max_abs())
}

/// Finds `tau` with `relabel(A, tau)` inside one of the two canonical cones.
///
/// Searches all 24 relabelings against both seeds and keeps the candidate
/// with the largest slack. Inputs closer than
/// `BOUNDARY_MARGIN * max |R_ij|` to a wall raise [`Error::BoundaryCase`].
pub fn classify_region4(a: &ComparisonMatrix) -> Result<Classification> {
    classify_region4_with(a, BOUNDARY_MARGIN)
}

pub fn classify_region4_with(a: &ComparisonMatrix, margin: f64) -> Result<Classification> {
    require4(a)?;
    let size = cyclic_size(a)?;
    let limit = margin * size;
    let mut best: Option<Classification> = None;
    for tau in Permutation::all(4) {
        let y = a.relabel(&tau)?;
        let f = f_values(&y);
        for region in Region4::seeds() {
            let slack = region.min_slack(&f);
            if best.as_ref().is_none_or(|b| slack > b.slack) {
                best = Some(Classification {
                    region,
                    tau: tau.clone(),
                    f_values: f,
                    slack,
                });
            }
        }
    }
    let best = best.expect("S4 is not empty");
    if size == 0.0 || best.slack.abs() <= limit {
        return Err(Error::BoundaryCase(best.slack));
    }
    if best.slack < 0.0 {
        return Err(Error::NotFound);
    }
    Ok(best)
}

/// Tropical eigenpair of a 4x4 additive matrix from the region formulas.
///
/// Strongly transitive input (zero cyclic part) returns `lambda = 0` and
/// `m = h` directly.
pub fn tropical_closed_form4(a: &ComparisonMatrix) -> Result<TropicalSolution> {
    tropical_closed_form4_with(a, BOUNDARY_MARGIN)
}

pub fn tropical_closed_form4_with(a: &ComparisonMatrix, margin: f64) -> Result<TropicalSolution> {
    require4(a)?;
    let h = hodge_scores(a);
    if cyclic_size(a)? <= 1e-12 * a.max_abs().max(1.0) {
        return Ok(TropicalSolution {
            lambda: 0.0,
            eigenvector: h,
            critical_vertices: (0..4).collect(),
            critical_edges: (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect(),
            critical_class_count: 1,
            unique: true,
        });
    }
    let c = classify_region4_with(a, margin)?;
    let off = c.region.offset(&c.f_values);
    // m(A)_i = m(Y)_{tau(i)} and h(A)_i = h(Y)_{tau(i)}
    let values: Vec<f64> = (0..4).map(|i| h.values[i] + off[c.tau.apply(i)]).collect();
    let eigenvector = ScoreVector {
        values,
        scale: Scale::Additive,
        normalization: Normalization::None,
    }
    .sum_zero();
    let cycle = c.critical_cycle();
    let mut critical_edges: Vec<(usize, usize)> = (0..cycle.len())
        .map(|p| (cycle[p], cycle[(p + 1) % cycle.len()]))
        .collect();
    critical_edges.sort_unstable();
    let mut critical_vertices = cycle;
    critical_vertices.sort_unstable();
    Ok(TropicalSolution {
        lambda: c.region.lambda(&c.f_values),
        eigenvector,
        critical_vertices,
        critical_edges,
        critical_class_count: 1,
        unique: true,
    })
}

/// Outcome of projecting the 64 sign matrices `A + E`, `E_ij = ±1`, onto the
/// strongly transitive subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutahedronRecord {
    /// Distinct projected score vectors.
    pub distinct_points: usize,
    /// Permutations of `(3, 1, -1, -3) / 4` (shifted by `h(A)`) that were hit.
    pub vertices_hit: usize,
    /// Sign patterns landing on a vertex.
    pub vertex_projections: usize,
    /// Sign patterns landing strictly inside the hull.
    pub interior_projections: usize,
    /// Sign patterns landing on the hull boundary but not on a vertex.
    pub boundary_projections: usize,
    /// Largest distance from a vertex projection to its vertex.
    pub max_vertex_error: f64,
}

impl PermutahedronRecord {
    pub fn all_projections_are_vertices(&self) -> bool {
        self.vertex_projections == 64
    }
}

/// Checks that the projected cube is the permutahedron of `(3, 1, -1, -3)/4`
/// centred at `h(A)`: every vertex is attained and no projection leaves the
/// hull.
pub fn permutahedron_check4(a: &ComparisonMatrix) -> Result<PermutahedronRecord> {
    require4(a)?;
    const TOL: f64 = 1e-9;
    let h = hodge_scores(a);
    let base = [3.0, 1.0, -1.0, -3.0].map(|x| x / 4.0);
    let vertices: Vec<Vec<f64>> = Permutation::all(4)
        .iter()
        .map(|p| p.permute_vec(&base))
        .collect();
    // partial sums of the sorted vertex: 3/4, 1, 3/4
    let caps = [0.75, 1.0, 0.75];

    let mut hit = [false; 24];
    let mut points: Vec<Vec<f64>> = Vec::new();
    let (mut on_vertex, mut interior, mut boundary) = (0, 0, 0);
    let mut max_err = 0.0f64;
    for mask in 0u32..64 {
        let e = ComparisonMatrix::additive_from_upper(4, |i, j| {
            let bit = crate::matrix::pair_index(4, i, j);
            if mask >> bit & 1 == 1 {
                1.0
            } else {
                -1.0
            }
        })?;
        let d: Vec<f64> = hodge_scores(&a.combine(&e)?)
            .values
            .iter()
            .zip(&h.values)
            .map(|(x, y)| x - y)
            .collect();
        if !points
            .iter()
            .any(|p| p.iter().zip(&d).all(|(x, y)| (x - y).abs() <= TOL))
        {
            points.push(d.clone());
        }
        let nearest = vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (k, v.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if nearest.1 <= TOL {
            hit[nearest.0] = true;
            on_vertex += 1;
            max_err = max_err.max(nearest.1);
            continue;
        }
        let mut sorted = d.clone();
        sorted.sort_by(|x, y| y.total_cmp(x));
        let mut partial = 0.0;
        let mut tight = false;
        for (k, cap) in caps.iter().enumerate() {
            partial += sorted[k];
            if partial > cap + TOL {
                return Err(Error::CheckFailed(format!(
                    "projection {d:?} lies outside the permutahedron"
                )));
            }
            tight |= partial >= cap - TOL;
        }
        if sorted.iter().sum::<f64>().abs() > TOL {
            return Err(Error::CheckFailed(format!("projection {d:?} is not sum-zero")));
        }
        if tight {
            boundary += 1;
        } else {
            interior += 1;
        }
    }
    let vertices_hit = hit.iter().filter(|&&b| b).count();
    if vertices_hit != 24 {
        return Err(Error::CheckFailed(format!(
            "only {vertices_hit} of 24 permutahedron vertices attained"
        )));
    }
    Ok(PermutahedronRecord {
        distinct_points: points.len(),
        vertices_hit,
        vertex_projections: on_vertex,
        interior_projections: interior,
        boundary_projections: boundary,
        max_vertex_error: max_err,
    })
}
