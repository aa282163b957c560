//! Command-line front end for `pairank`: argument parsing, the five
//! subcommands and report formatting. `main.rs` only prints and exits.

pub mod commands;
pub mod format;
pub mod report;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pairank::witness::MethodPair;
use pairank::{Ranking, Scale, DEFAULT_RECIPROCITY_TOL};

pub use report::RankReport;

#[derive(Debug, Parser)]
#[command(name = "pairank", version, about = "Rank items from pairwise comparison matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Read input as additive or multiplicative, overriding any header.
    #[arg(long, global = true)]
    pub scale: Option<Scale>,
    /// Exponent base linking additive and multiplicative matrices ("e" or a number).
    #[arg(long, global = true, default_value = "e", value_parser = parse_base)]
    pub base: f64,
    /// Largest accepted |x_ij x_ji - 1| (multiplicative) or |a_ij + a_ji| (additive).
    #[arg(long, global = true, default_value_t = DEFAULT_RECIPROCITY_TOL)]
    pub reciprocity_tol: f64,
    /// Output format; defaults to csv for `trajectory` and json otherwise.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for `simulate`; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseKind {
    /// Independent normal noise on every upper-triangle entry.
    Gaussian,
    /// Uniform coefficients on the 3-cycles through item 1.
    UniformCyclic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal eigenvector, HodgeRank and tropical rankings of a matrix file.
    Rank {
        /// Matrix file, or "-" for stdin.
        path: PathBuf,
    },
    /// Build a matrix on which two methods give two prescribed rankings.
    Witness {
        #[arg(long)]
        pair: MethodPair,
        #[arg(long)]
        n: usize,
        /// Ranking wanted from the first method, e.g. 3,1,4,2.
        #[arg(long)]
        sigma1: Ranking,
        /// Ranking wanted from the second method.
        #[arg(long)]
        sigma2: Ranking,
        /// Write the matrix file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the verification report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Locate a 4x4 matrix among the 48 closed-form regions.
    Classify4 { path: PathBuf },
    /// Monte Carlo rate of ranking disagreement between the methods.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = NoiseKind::Gaussian)]
        noise: NoiseKind,
        /// Standard deviation (gaussian) or half-width (uniform-cyclic).
        #[arg(long, default_value_t = 1.0)]
        noise_scale: f64,
        /// Comma-separated additive true scores; all zero if omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        true_scores: Option<Vec<f64>>,
    },
    /// Principal eigenvectors of Hadamard powers X^(k) over a grid of k.
    Trajectory {
        path: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        k_min: f64,
        #[arg(long, default_value_t = 60.0)]
        k_max: f64,
        /// Number of log-spaced grid points.
        #[arg(long, default_value_t = 60)]
        points: usize,
        /// Extra exponents merged into the grid, e.g. 1,31,32.
        #[arg(long, value_delimiter = ',')]
        extra_k: Vec<f64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn parse_base(s: &str) -> std::result::Result<f64, String> {
    let b = if s.trim() == "e" {
        std::f64::consts::E
    } else {
        s.trim().parse::<f64>().map_err(|e| e.to_string())?
    };
    pairank::matrix::check_base(b).map_err(|e| e.to_string())?;
    Ok(b)
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    /// 0 on success, 2 for a degenerate or boundary result.
    pub code: i32,
}

/// Exit status for an error: 2 when the input was valid but the result is
/// degenerate (ties, boundary, no convergence), 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use pairank::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::TieDetected(..) | E::BoundaryCase(_) | E::NotFound | E::NoConvergence(_)) => 2,
        _ => 1,
    }
}

pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Rank { path } => commands::rank(g, path),
        Command::Witness {
            pair,
            n,
            sigma1,
            sigma2,
            out,
            report,
        } => commands::witness(g, *pair, *n, sigma1, sigma2, out.as_deref(), report.as_deref()),
        Command::Classify4 { path } => commands::classify4(g, path),
        Command::Simulate {
            n,
            trials,
            noise,
            noise_scale,
            true_scores,
        } => commands::simulate(g, *n, *trials, *noise, *noise_scale, true_scores.clone()),
        Command::Trajectory {
            path,
            k_min,
            k_max,
            points,
            extra_k,
            tol,
        } => commands::trajectory(g, path, *k_min, *k_max, *points, extra_k, *tol),
    }
}

/// Writes every file or none: all contents go to temporary files in the
/// target directories first and are renamed into place afterwards.
pub fn write_files(files: &[(PathBuf, String)]) -> Result<()> {
    let mut staged = Vec::new();
    for (path, text) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)
            .with_context(|| format!("creating a file in {}", dir.display()))?;
        std::io::Write::write_all(&mut tmp, text.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
