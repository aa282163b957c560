use std::path::Path;

use anyhow::{bail, Context, Result};
use pairank::analysis::{
    hadamard_trajectory, log_grid, monte_carlo_disagreement, Noise, SimulationConfig,
};
use pairank::geometry::{classify_region4, tropical_closed_form4, Facet, RegionId};
use pairank::io::{fmt_num, format_matrix, parse_matrix};
use pairank::witness::{
    construct_witness, verify, Method, MethodPair, WitnessParameters, WitnessRequest,
};
use pairank::{hodge_scores, ComparisonMatrix, Ranking, Scale};
use serde::{Deserialize, Serialize};

use crate::format::{csv, dec3, round12, table, to_json};
use crate::report::{compact, RankReport};
use crate::{read_input, Format, GlobalOpts, NoiseKind, Outcome};

fn load(g: &GlobalOpts, path: &Path) -> Result<ComparisonMatrix> {
    let text = read_input(path)?;
    parse_matrix(&text, g.scale, g.reciprocity_tol)
        .with_context(|| format!("in {}", path.display()))
}

fn done(stdout: String) -> Outcome {
    Outcome {
        stdout,
        ..Outcome::default()
    }
}

pub fn rank(g: &GlobalOpts, path: &Path) -> Result<Outcome> {
    let m = load(g, path)?;
    let report = RankReport::build(&path.display().to_string(), &m, g.base)?;
    let stdout = match g.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv(),
    };
    Ok(Outcome {
        stdout,
        files: Vec::new(),
        code: if report.is_degenerate() { 2 } else { 0 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodCheck {
    pub method: Method,
    pub scores: Vec<f64>,
    pub ranking: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub pair: MethodPair,
    pub n: usize,
    pub sigma1: String,
    pub sigma2: String,
    pub scale: Scale,
    pub parameters: WitnessParameters,
    pub matrix: Vec<Vec<f64>>,
    pub first: MethodCheck,
    pub second: MethodCheck,
    /// The rankings were recomputed from the written matrix file.
    pub file_verified: bool,
}

pub fn witness(
    g: &GlobalOpts,
    pair: MethodPair,
    n: usize,
    sigma1: &Ranking,
    sigma2: &Ranking,
    out: Option<&Path>,
    report_path: Option<&Path>,
) -> Result<Outcome> {
    let req = WitnessRequest::new(n, pair, sigma1.clone(), sigma2.clone())?;
    let w = construct_witness(&req, g.base)?;
    let text = format_matrix(&w.matrix);
    // the file is what users keep, so verify what was written
    let reread = parse_matrix(&text, None, pairank::DEFAULT_RECIPROCITY_TOL)?;
    let checked = verify(&req, &reread, g.base)
        .context("witness rankings do not survive 12-digit output")?;
    let check = |o: &pairank::witness::MethodOutcome| MethodCheck {
        method: o.method,
        scores: o.scores.values.iter().map(|&x| round12(x)).collect(),
        ranking: compact(&o.ranking),
    };
    let report = WitnessReport {
        pair,
        n,
        sigma1: compact(sigma1),
        sigma2: compact(sigma2),
        scale: reread.scale(),
        parameters: w.parameters.clone(),
        matrix: reread.rows(),
        first: check(&checked.first),
        second: check(&checked.second),
        file_verified: true,
    };
    let json = to_json(&report)?;
    let mut files = Vec::new();
    if let Some(p) = out {
        files.push((p.to_path_buf(), text.clone()));
    }
    let stdout = match (report_path, g.format.unwrap_or(Format::Json)) {
        (Some(p), _) => {
            files.push((p.to_path_buf(), json));
            String::new()
        }
        (None, Format::Json) => json,
        (None, Format::Csv) => text,
        (None, Format::Table) => {
            let mut s = table(
                &["method", "ranking"],
                &[
                    vec![report.first.method.to_string(), report.first.ranking.clone()],
                    vec![report.second.method.to_string(), report.second.ranking.clone()],
                ],
            );
            s.push('\n');
            let rows: Vec<Vec<String>> = report.matrix.iter().map(|r| r.iter().map(|&x| dec3(x)).collect()).collect();
            let header: Vec<String> = (1..=n).map(|j| j.to_string()).collect();
            s.push_str(&table(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows));
            s
        }
    };
    Ok(Outcome {
        stdout,
        files,
        code: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub input: String,
    pub region: RegionId,
    /// `hexagon` (3-cycle critical) or `square` (4-cycle critical).
    pub facet: String,
    /// 1-based, in the input's labels.
    pub critical_cycle: Vec<usize>,
    /// 1-based images of the relabeling into the canonical region.
    pub tau: Vec<usize>,
    pub f_values: [f64; 3],
    pub slack: f64,
    pub lambda: f64,
    /// Tropical eigenvector, sum zero.
    pub m: Vec<f64>,
    /// HodgeRank scores, sum zero.
    pub h: Vec<f64>,
}

pub fn classify4(g: &GlobalOpts, path: &Path) -> Result<Outcome> {
    let m = load(g, path)?;
    let a = match m.scale() {
        Scale::Additive => m,
        Scale::Multiplicative => m.to_additive(g.base)?,
    };
    if a.n() != 4 {
        bail!("classify4 needs a 4x4 matrix, got {}x{}", a.n(), a.n());
    }
    let c = classify_region4(&a)?;
    let sol = tropical_closed_form4(&a)?;
    let r = |v: &[f64]| v.iter().map(|&x| round12(x)).collect::<Vec<_>>();
    let report = ClassifyReport {
        input: path.display().to_string(),
        region: c.region.id,
        facet: match c.region.facet {
            Facet::Hexagon { .. } => "hexagon".into(),
            Facet::Square { .. } => "square".into(),
        },
        critical_cycle: c.critical_cycle().iter().map(|v| v + 1).collect(),
        tau: c.tau.one_based(),
        f_values: c.f_values.map(round12),
        slack: round12(c.slack),
        lambda: round12(sol.lambda),
        m: r(&sol.eigenvector.values),
        h: r(&hodge_scores(&a).values),
    };
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let kv = |f: &dyn Fn(f64) -> String| -> Vec<Vec<String>> {
        let list = |v: &[f64]| v.iter().map(|&x| f(x)).collect::<Vec<_>>().join(" ");
        vec![
            vec!["region".into(), report.region.to_string()],
            vec!["facet".into(), report.facet.clone()],
            vec!["critical_cycle".into(), join(&report.critical_cycle)],
            vec!["tau".into(), join(&report.tau)],
            vec!["f_values".into(), list(&report.f_values)],
            vec!["slack".into(), f(report.slack)],
            vec!["lambda".into(), f(report.lambda)],
            vec!["m".into(), list(&report.m)],
            vec!["h".into(), list(&report.h)],
        ]
    };
    let stdout = match g.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Table => table(&["field", "value"], &kv(&dec3)),
        Format::Csv => csv(&["field", "value"], &kv(&fmt_num)),
    };
    Ok(done(stdout))
}

pub fn simulate(
    g: &GlobalOpts,
    n: usize,
    trials: u64,
    noise: NoiseKind,
    noise_scale: f64,
    true_scores: Option<Vec<f64>>,
) -> Result<Outcome> {
    let cfg = SimulationConfig {
        n,
        trials,
        noise: match noise {
            NoiseKind::Gaussian => Noise::GaussianUpperTriangle { sd: noise_scale },
            NoiseKind::UniformCyclic => Noise::UniformStPerp {
                halfwidth: noise_scale,
            },
        },
        true_scores,
        seed: g.seed,
    };
    let report = monte_carlo_disagreement(&cfg, g.jobs)?;
    let rows = |f: &dyn Fn(f64) -> String| -> Vec<Vec<String>> {
        report
            .pairs
            .iter()
            .map(|p| {
                vec![
                    p.pair.to_string(),
                    p.disagreements.to_string(),
                    f(p.rate),
                    f(p.mean_kendall),
                ]
            })
            .collect()
    };
    let header = ["pair", "disagreements", "rate", "mean_kendall"];
    let stdout = match g.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report)?,
        Format::Csv => csv(&header, &rows(&fmt_num)),
        Format::Table => {
            let mut s = format!(
                "n = {}, trials = {}, ranked = {}, degenerate = {}, failed = {}, all agree = {}\n\n",
                report.n,
                report.trials,
                report.ranked_trials,
                report.degenerate_trials,
                report.failed_trials,
                report.all_agree
            );
            s.push_str(&table(&header, &rows(&dec3)));
            s
        }
    };
    Ok(done(stdout))
}

pub fn trajectory(
    g: &GlobalOpts,
    path: &Path,
    k_min: f64,
    k_max: f64,
    points: usize,
    extra_k: &[f64],
    tol: f64,
) -> Result<Outcome> {
    if !(k_min > 0.0 && k_max >= k_min && k_max.is_finite()) {
        bail!("need 0 < k-min <= k-max, got {k_min} and {k_max}");
    }
    if points == 0 {
        bail!("need at least one grid point");
    }
    if !(tol > 0.0 && tol < 1.0) {
        bail!("tolerance must lie in (0, 1), got {tol}");
    }
    let m = load(g, path)?;
    let x = match m.scale() {
        Scale::Multiplicative => m,
        Scale::Additive => m.to_multiplicative(g.base)?,
    };
    let mut grid = log_grid(k_min, k_max, points);
    grid.extend_from_slice(extra_k);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let pts = hadamard_trajectory(&x, &grid, tol)?;
    let n = x.n();
    let rows = |f: &dyn Fn(f64) -> String| -> Vec<Vec<String>> {
        pts.iter()
            .map(|p| {
                let mut r = vec![fmt_num(p.k)];
                if p.v_normalized.is_empty() {
                    r.extend(std::iter::repeat_n(String::new(), n));
                } else {
                    r.extend(p.v_normalized.iter().map(|&v| f(v)));
                }
                r.push(p.ranking.to_string());
                r
            })
            .collect()
    };
    let header: Vec<String> = std::iter::once("k".to_string())
        .chain((1..=n).map(|i| format!("v{i}")))
        .chain(std::iter::once("ranking".to_string()))
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let stdout = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(&header, &rows(&fmt_num)),
        Format::Table => table(&header, &rows(&dec3)),
        Format::Json => to_json(&pts)?,
    };
    Ok(done(stdout))
}
