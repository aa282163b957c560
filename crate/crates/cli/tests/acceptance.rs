//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

#[path = "../../core/tests/common/oracle.rs"]
#[allow(dead_code)]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use oracle::*;
use pairank::analysis::{default_k_grid, hadamard_trajectory};
use pairank::geometry::{m_minus_h_reduction, permutahedron_check4, tropical_closed_form4};
use pairank::methods::principal_hadamard;
use pairank::witness::{construct_witness, MethodPair, WitnessRequest};
use pairank::{
    hodge_scores, principal_scores, tropical_eigenvalue, tropical_scores_multiplicative,
    tropical_solve, ComparisonMatrix, Error, Permutation, PowerOptions, Ranking, Scale,
    ScoreVector, DEFAULT_TIE_TOL,
};
use rand::seq::IndexedRandom;

type Outcome = Result<String, String>;

const EXAMPLE: &str = "1,1.57,0.72,0.70\n0.63,1,1.52,0.65\n1.38,0.65,1,1.57\n1.45,1.52,0.63,1\n";

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pairank")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn within(got: &[f64], want: &[f64], tol: f64) -> bool {
    got.len() == want.len() && max_diff(got, want) <= tol
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn example_rank() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("example.csv");
    std::fs::write(&path, EXAMPLE).unwrap();
    let t = Instant::now();
    let (code, out, err) = bin(&["rank", path.to_str().unwrap(), "--reciprocity-tol", "0.05"]);
    let elapsed = t.elapsed();
    check(code == 0, || format!("rank exited {code}: {err}"))?;
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    let scores = |m: &str| -> Vec<f64> {
        r[m]["scores"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
    };
    let mut problems = Vec::new();
    for (m, want) in [
        ("principal", [1.0, 0.991, 1.191, 1.151]),
        ("hodge", [1.0, 0.942, 1.155, 1.151]),
        ("tropical", [1.0, 0.979, 0.989, 0.968]),
    ] {
        if !within(&scores(m), &want, 0.005) {
            problems.push(format!("{m} scores {:?}", scores(m)));
        }
    }
    for (m, want) in [("principal", "3>4>1>2"), ("hodge", "3>4>1>2"), ("tropical", "1>3>2>4")] {
        if r[m]["ranking"] != want {
            problems.push(format!("{m} ranking {}", r[m]["ranking"]));
        }
    }
    let ci = r["consistency_index"].as_f64().unwrap();
    if (ci - 0.07073).abs() > 5e-4 {
        problems.push(format!("consistency index {ci} is not 0.07073 +- 5e-4"));
    }
    if elapsed >= Duration::from_secs(1) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    if problems.is_empty() {
        Ok(format!("vectors and rankings match, CI {ci}, {elapsed:.2?}"))
    } else {
        Err(problems.join("; "))
    }
}

fn three_item_collapse() -> Outcome {
    let t = Instant::now();
    let mut r = rng(1002);
    let mut disagreements = 0;
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x = random_mpcm(3, 1.0, &mut r);
        let v = principal_scores(&x, 1e-12, 100_000).map_err(|e| e.to_string())?.eigenvector;
        let h = hodge_scores(&x);
        let m = tropical_scores_multiplicative(&x, std::f64::consts::E).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(&v.values, &h.values)).max(max_diff(&m.values, &h.values));
        let rk = |s: &ScoreVector| s.ranking(DEFAULT_TIE_TOL).ok();
        if rk(&v) != rk(&h) || rk(&m) != rk(&h) {
            disagreements += 1;
        }
    }
    let elapsed = t.elapsed();
    check(worst <= 1e-9, || format!("max component difference {worst:e}"))?;
    check(disagreements == 0, || format!("{disagreements} ranking disagreements"))?;
    check(elapsed < Duration::from_secs(10), || format!("runtime {elapsed:?}"))?;
    Ok(format!("10000 matrices, max difference {worst:.1e}, {elapsed:.2?}"))
}

/// Rankings recomputed with the slow oracles: (hodge, principal, tropical).
fn oracle_orders(a: &ComparisonMatrix) -> (Vec<usize>, Option<Vec<usize>>, Vec<usize>) {
    let add = match a.scale() {
        Scale::Additive => a.clone(),
        Scale::Multiplicative => a.to_additive(std::f64::consts::E).unwrap(),
    };
    let v = (a.scale() == Scale::Multiplicative).then(|| order_desc(&naive_perron(a).1));
    let s = tropical_solve(&add);
    assert!((s.lambda - brute_force_lambda(&add)).abs() < 1e-9 * s.lambda.abs().max(1.0));
    (order_desc(&least_squares_scores(&add)), v, order_desc(&s.eigenvector.values))
}

fn witnesses() -> Outcome {
    let t = Instant::now();
    let mut r = rng(1003);
    let mut built = 0;
    for pair in MethodPair::ALL {
        for (n, count) in [(4, 200), (5, 100)] {
            for _ in 0..count {
                let s1 = Ranking::new(random_order(n, &mut r)).unwrap();
                let s2 = Ranking::new(random_order(n, &mut r)).unwrap();
                let req = WitnessRequest::new(n, pair, s1.clone(), s2.clone()).unwrap();
                let w = construct_witness(&req, std::f64::consts::E)
                    .map_err(|e| format!("{pair} {s1} / {s2}: {e}"))?;
                let (h, v, m) = oracle_orders(&w.matrix);
                let (got1, got2) = match pair {
                    MethodPair::HodgeVsTropical => (h, m),
                    MethodPair::HodgeVsPrincipal => (h, v.unwrap()),
                    MethodPair::TropicalVsPrincipal => (m, v.unwrap()),
                };
                check(got1 == s1.order() && got2 == s2.order(), || {
                    format!("{pair} {s1} / {s2}: recomputed {got1:?} / {got2:?}")
                })?;
                built += 1;
            }
        }
    }
    let elapsed = t.elapsed();
    check(elapsed < Duration::from_secs(300), || format!("runtime {elapsed:?}"))?;
    Ok(format!("{built} witnesses verified, {elapsed:.2?}"))
}

fn closed_form() -> Outcome {
    let t = Instant::now();
    let mut r = rng(1004);
    let total = 100_000;
    let (mut skipped, mut worst) = (0usize, 0.0f64);
    for _ in 0..total {
        let a = random_additive(4, 1.0, &mut r);
        let c = match tropical_closed_form4(&a) {
            Ok(c) => c,
            Err(Error::BoundaryCase(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let g = tropical_solve(&a);
        worst = worst
            .max((c.lambda - g.lambda).abs())
            .max(max_diff(&c.eigenvector.values, &g.eigenvector.values));
    }
    let elapsed = t.elapsed();
    let rate = skipped as f64 / total as f64;
    check(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    check(rate < 0.01, || format!("skip rate {rate}"))?;
    check(elapsed < Duration::from_secs(30), || format!("runtime {elapsed:?}"))?;
    Ok(format!("max deviation {worst:.1e}, skip rate {:.3}%, {elapsed:.2?}", 100.0 * rate))
}

fn karp() -> Outcome {
    let mut r = rng(1005);
    let mut worst = 0.0f64;
    for n in [3, 4, 5, 6] {
        for _ in 0..10_000 {
            let a = random_additive(n, 1.0, &mut r);
            worst = worst.max((tropical_eigenvalue(&a) - brute_force_lambda(&a)).abs());
        }
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("40000 matrices, max deviation {worst:.1e}"))
}

fn hadamard_limit() -> Outcome {
    let mut r = rng(1006);
    let opts = PowerOptions::default();
    let (mut cases, mut improving, mut worst) = (0usize, 0usize, 0.0f64);
    for n in [4, 5] {
        let mut done = 0;
        while done < 100 {
            let x = random_mpcm(n, 1.0, &mut r);
            let s = tropical_solve(&x);
            if !s.unique {
                continue;
            }
            let centre = |v: &[f64]| {
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                v.iter().map(|y| y - mean).collect::<Vec<_>>()
            };
            let m = centre(&s.eigenvector.values);
            let err = |k: f64| -> Result<f64, String> {
                let p = principal_hadamard(&x, k, &opts).map_err(|e| e.to_string())?;
                let l: Vec<f64> = p.log_scores.iter().map(|y| y / k).collect();
                Ok(max_diff(&centre(&l), &m))
            };
            let (e100, e1000) = (err(100.0)?, err(1000.0)?);
            worst = worst.max(e1000);
            improving += (e1000 < e100) as usize;
            cases += 1;
            done += 1;
        }
    }
    let detail = format!("max error at k=1000 {worst:.1e}; strictly smaller than at k=100 in {improving}/{cases}");
    check(worst < 1e-2, || detail.clone())?;
    check(improving * 100 >= 95 * cases, || detail.clone())?;
    Ok(detail)
}

fn example_trajectory() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("example.csv");
    std::fs::write(&path, EXAMPLE).unwrap();
    let extra: Vec<String> = std::iter::once(1).chain(31..=60).map(|k| k.to_string()).collect();
    let (code, out, err) = bin(&[
        "trajectory", path.to_str().unwrap(), "--reciprocity-tol", "0.05", "--extra-k", &extra.join(","),
    ]);
    check(code == 0, || format!("trajectory exited {code}: {err}"))?;
    let rows: Vec<(f64, String)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[f.len() - 1].to_string())
        })
        .collect();
    let at1 = rows.iter().find(|(k, _)| *k == 1.0).map(|(_, r)| r.clone());
    check(at1.as_deref() == Some("3>4>1>2"), || format!("ranking at k=1 is {at1:?}"))?;
    let late: Vec<&(f64, String)> = rows.iter().filter(|(k, _)| (31.0..=60.0).contains(k)).collect();
    let bad: Vec<String> = late.iter().filter(|(_, r)| r != "1>3>2>4").map(|(k, r)| format!("{k}: {r}")).collect();
    check(bad.is_empty(), || format!("k in [31, 60] with other rankings: {bad:?}"))?;
    // the library sweep agrees with the command
    let x = example_matrix();
    let pts = hadamard_trajectory(&x, &default_k_grid(), 1e-12).map_err(|e| e.to_string())?;
    check(pts.last().unwrap().ranking.to_string() == "1>3>2>4", || "library sweep differs".into())?;
    Ok(format!("k=1 gives 3>4>1>2; {} sampled k in [31, 60] give 1>3>2>4", late.len()))
}

fn reduction() -> Outcome {
    let mut r = rng(1008);
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [4, 5] {
        let mut done = 0;
        while done < 1_000 {
            let a = random_additive(n, 1.0, &mut r);
            if !tropical_solve(&a).unique {
                continue;
            }
            let rec = m_minus_h_reduction(&a).map_err(|e| e.to_string())?;
            // independent check of the eigenvalue part
            let (_, rest) = pairank::geometry::project_components(&a).unwrap();
            let oracle = (brute_force_lambda(&rest) - brute_force_lambda(&a)).abs();
            worst = worst.max(rec.lambda_residual).max(rec.vector_residual).max(oracle);
            done += 1;
            count += 1;
        }
    }
    check(worst < 1e-9, || format!("max residual {worst:e}"))?;
    Ok(format!("{count} matrices, max residual {worst:.1e}"))
}

fn permutahedron() -> Outcome {
    let mut r = rng(1009);
    let s = ScoreVector::additive(random_scores(4, &mut r)).unwrap();
    let inputs = [
        ("zero", ComparisonMatrix::zeros(4)),
        ("random", random_additive(4, 1.0, &mut r)),
        ("strongly transitive", ComparisonMatrix::strongly_transitive_from_scores(&s).unwrap()),
    ];
    let base = [0.75, 0.25, -0.25, -0.75];
    let mut problems = Vec::new();
    let mut hull = Vec::new();
    for (name, a) in &inputs {
        let h = least_squares_scores(a);
        let vertices: Vec<Vec<f64>> = Permutation::all(4)
            .iter()
            .map(|p| p.permute_vec(&base).iter().zip(&h).map(|(x, y)| x + y).collect())
            .collect();
        let mut points: Vec<Vec<f64>> = Vec::new();
        for mask in 0u32..64 {
            let e = ComparisonMatrix::additive_from_upper(4, |i, j| {
                if mask >> pairank::matrix::pair_index(4, i, j) & 1 == 1 { 1.0 } else { -1.0 }
            })
            .unwrap();
            let p = least_squares_scores(&a.combine(&e).unwrap());
            if !points.iter().any(|q| max_diff(q, &p) <= 1e-9) {
                points.push(p);
            }
        }
        let all_vertices = points.iter().all(|p| vertices.iter().any(|v| max_diff(v, p) <= 1e-9));
        let all_hit = vertices.iter().all(|v| points.iter().any(|p| max_diff(v, p) <= 1e-9));
        if !(all_vertices && all_hit && points.len() == 24) {
            problems.push(format!("{name}: {} distinct projections, all 24 vertices hit: {all_hit}", points.len()));
        }
        hull.push(permutahedron_check4(a).is_ok());
    }
    let hull_note = format!("hull check (vertices attained, nothing outside) holds: {}", hull.iter().all(|&b| b));
    if problems.is_empty() {
        Ok(hull_note)
    } else {
        Err(format!("{}; {hull_note}", problems.join("; ")))
    }
}

fn invariance() -> Outcome {
    let mut r = rng(1010);
    let perms = Permutation::all(5);
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let a = random_additive(5, 1.0, &mut r);
        let tau = perms.choose(&mut r).unwrap();
        let y = a.relabel(tau).unwrap();
        // relabeling
        worst = worst.max(max_diff(&hodge_scores(&y).values, &hodge_scores(&a).permuted(tau).values));
        let m = tropical_solve(&a);
        if m.unique {
            worst = worst.max(max_diff(&tropical_solve(&y).eigenvector.values, &m.eigenvector.permuted(tau).values));
        }
        let x = a.to_multiplicative(std::f64::consts::E).unwrap();
        let v = principal_scores(&x, 1e-12, 100_000).unwrap().eigenvector;
        let vy = principal_scores(&x.relabel(tau).unwrap(), 1e-12, 100_000).unwrap().eigenvector;
        worst = worst.max(max_diff_up_to_constant(&vy.log_values(), &v.permuted(tau).log_values()));
    }
    for _ in 0..1_000 {
        let a = random_additive(5, 1.0, &mut r);
        // scaling: h is linear, m and lambda positively homogeneous
        let h = hodge_scores(&a).values;
        let m = tropical_solve(&a);
        for c in [-3.0, 0.5, 4.0] {
            let hc: Vec<f64> = h.iter().map(|x| c * x).collect();
            worst = worst.max(max_diff(&hodge_scores(&a.scaled(c)).values, &hc));
            if c > 0.0 && m.unique {
                let mc: Vec<f64> = m.eigenvector.values.iter().map(|x| c * x).collect();
                let s = tropical_solve(&a.scaled(c));
                worst = worst.max(max_diff(&s.eigenvector.values, &mc)).max((s.lambda - c * m.lambda).abs());
            }
        }
    }
    for _ in 0..1_000 {
        let a = random_additive(5, 1.0, &mut r);
        let w = ComparisonMatrix::strongly_transitive_from_scores(&ScoreVector::additive(random_scores(5, &mut r)).unwrap()).unwrap();
        let hw = hodge_scores(&w).values;
        let sum = a.combine(&w).unwrap();
        let plus = |p: &[f64]| p.iter().zip(&hw).map(|(x, y)| x + y).collect::<Vec<_>>();
        worst = worst.max(max_diff(&hodge_scores(&sum).values, &plus(&hodge_scores(&a).values)));
        let m = tropical_solve(&a);
        if m.unique {
            worst = worst.max(max_diff(&tropical_solve(&sum).eigenvector.values, &plus(&m.eigenvector.values)));
        }
        let e = std::f64::consts::E;
        let v = principal_scores(&a.to_multiplicative(e).unwrap(), 1e-12, 100_000).unwrap().eigenvector;
        let vs = principal_scores(&sum.to_multiplicative(e).unwrap(), 1e-12, 100_000).unwrap().eigenvector;
        worst = worst.max(max_diff_up_to_constant(&vs.log_values(), &plus(&v.log_values())));
    }
    check(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("3000 instances, max deviation {worst:.1e}"))
}

fn simulation() -> Outcome {
    let args = ["simulate", "--n", "4", "--trials", "10000", "--seed", "7"];
    let runs: Vec<(i32, String, String)> = [None, None, Some("1"), Some("4")]
        .iter()
        .map(|jobs| {
            let mut a: Vec<&str> = args.to_vec();
            if let Some(j) = jobs {
                a.extend(["--jobs", j]);
            }
            bin(&a)
        })
        .collect();
    check(runs.iter().all(|r| r.0 == 0), || format!("simulate failed: {}", runs[0].2))?;
    check(runs.iter().all(|r| r.1 == runs[0].1), || "outputs differ between runs".into())?;
    let v: serde_json::Value = serde_json::from_str(&runs[0].1).unwrap();
    let ht = v["pairs"].as_array().unwrap().iter().find(|p| p["pair"] == "hodge_vs_tropical").unwrap()["disagreements"]
        .as_u64()
        .unwrap();
    check(ht > 0, || "no tropical-vs-hodge disagreements".into())?;
    let (code, out, err) = bin(&["simulate", "--n", "3", "--trials", "10000", "--seed", "7"]);
    check(code == 0, || err.clone())?;
    let three: serde_json::Value = serde_json::from_str(&out).unwrap();
    let total: u64 = three["pairs"].as_array().unwrap().iter().map(|p| p["disagreements"].as_u64().unwrap()).sum();
    check(total == 0, || format!("n = 3 has {total} disagreements"))?;
    Ok(format!("byte-identical across runs and --jobs; {ht} tropical-vs-hodge disagreements at n = 4; none at n = 3"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("example reproduction", example_rank),
        ("three-item collapse", three_item_collapse),
        ("witness realization", witnesses),
        ("four-item closed form", closed_form),
        ("karp vs cycle enumeration", karp),
        ("hadamard power limit", hadamard_limit),
        ("trajectory ranking switch", example_trajectory),
        ("reduction to cyclic part", reduction),
        ("permutahedron projection", permutahedron),
        ("invariance suite", invariance),
        ("simulation determinism", simulation),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {d}", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {d}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
