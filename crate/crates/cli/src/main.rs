//! `capmarkov`: verify capacitary Markov inequalities from the command line.

mod commands;
mod config;
mod error;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use capmarkov::capacity::{CapacityConfig, DEFAULT_SEED};
use capmarkov::deform::GridSpec;
use capmarkov::markov::Theorem;
use capmarkov::poly::parse_complex;
use capmarkov::sets::Continuum;
use capmarkov::{Poly, Tolerances};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::config::FileConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "capmarkov", version, about = "Numerical checks of capacitary Markov inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an inequality and print one report per set or component.
    Verify(VerifyArgs),
    /// Estimate the logarithmic capacity of a set or of level-set components.
    Capacity(CapacityArgs),
    /// Split `{|f| <= level}` into components.
    Levelset(LevelsetArgs),
    /// Level-set checks on seeded random monic polynomials.
    Sweep(SweepArgs),
    /// Scan `F(lambda)` over the family `f + lambda` and test the mean-value inequality.
    Deform(DeformArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest point count of the d_n ladder.
    #[arg(long, value_parser = at_least_two)]
    n: Option<usize>,
    /// Boundary candidates handed to the d_n search.
    #[arg(long, value_parser = at_least_two)]
    candidates: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Default, Args)]
struct TolArgs {
    #[arg(long = "tol-root", value_parser = positive, allow_hyphen_values = true)]
    tol_root: Option<f64>,
    #[arg(long = "tol-cluster", value_parser = positive, allow_hyphen_values = true)]
    tol_cluster: Option<f64>,
    #[arg(long = "tol-level", value_parser = positive, allow_hyphen_values = true)]
    tol_level: Option<f64>,
    #[arg(long = "tol-merge", value_parser = positive, allow_hyphen_values = true)]
    tol_merge: Option<f64>,
    #[arg(long = "tol-sup", value_parser = positive, allow_hyphen_values = true)]
    tol_sup: Option<f64>,
    #[arg(long = "tol-verify-oracle", value_parser = positive, allow_hyphen_values = true)]
    tol_verify_oracle: Option<f64>,
    #[arg(long = "tol-verify-search", value_parser = positive, allow_hyphen_values = true)]
    tol_verify_search: Option<f64>,
    #[arg(long = "tol-mono", value_parser = positive, allow_hyphen_values = true)]
    tol_mono: Option<f64>,
    #[arg(long = "tol-subh", value_parser = positive, allow_hyphen_values = true)]
    tol_subh: Option<f64>,
    #[arg(long = "tol-subh-search", value_parser = positive, allow_hyphen_values = true)]
    tol_subh_search: Option<f64>,
    #[arg(long = "tol-const", value_parser = positive, allow_hyphen_values = true)]
    tol_constant: Option<f64>,
    #[arg(long = "tol-monic", value_parser = positive, allow_hyphen_values = true)]
    tol_monic: Option<f64>,
    #[arg(long = "tol-cert", value_parser = positive, allow_hyphen_values = true)]
    tol_cert: Option<f64>,
    #[arg(long = "tol-diam-cap", value_parser = positive, allow_hyphen_values = true)]
    tol_diam_cap: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Coefficients, constant term first: "a0,a1,...,ad".
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    poly: Poly,
    /// Continuum for theorems 1 and corollary, e.g. "segment:-1,1".
    #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
    set: Option<Continuum>,
    /// 1, 2, A or corollary; defaults to 1 with --set and 2 without.
    #[arg(long, value_parser = parse_theorem)]
    theorem: Option<Theorem>,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    level: Option<f64>,
    /// Boundary phases for level sets.
    #[arg(long, value_parser = at_least_two)]
    m: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[arg(long, value_parser = parse_set, allow_hyphen_values = true, required_unless_present = "poly", conflicts_with = "poly")]
    set: Option<Continuum>,
    /// Capacity of each component of {|f| <= level}.
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    poly: Option<Poly>,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    level: Option<f64>,
    #[arg(long, value_parser = at_least_two)]
    m: Option<usize>,
    /// Run the d_n search even where a closed form exists.
    #[arg(long)]
    search: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct LevelsetArgs {
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    poly: Poly,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    level: Option<f64>,
    #[arg(long, value_parser = at_least_two)]
    m: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    degree: u32,
    #[arg(long, value_parser = at_least_one)]
    trials: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct DeformArgs {
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    poly: Poly,
    /// Point near the zero whose component is followed.
    #[arg(long, value_parser = parse_marker, allow_hyphen_values = true, default_value = "0")]
    marker: Complex64,
    /// "cx,cy,r,res": lattice over the disc |lambda - (cx + i cy)| <= r.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "0,0,0.5,21")]
    grid: GridSpec,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    level: Option<f64>,
    /// Radius of the mean-value circles; defaults to 2.4 lattice steps.
    #[arg(long = "test-radius", value_parser = positive, allow_hyphen_values = true)]
    test_radius: Option<f64>,
    #[command(flatten)]
    common: Common,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

fn at_least(s: &str, min: usize) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v >= min {
        Ok(v)
    } else {
        Err(format!("must be at least {min}, got {v}"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    at_least(s, 1)
}

fn at_least_two(s: &str) -> Result<usize, String> {
    at_least(s, 2)
}

fn parse_poly(s: &str) -> Result<Poly, String> {
    let p: Poly = s.parse().map_err(|e: capmarkov::Error| e.to_string())?;
    if p.is_zero() {
        return Err("the zero polynomial is not allowed".into());
    }
    Ok(p)
}

fn parse_set(s: &str) -> Result<Continuum, String> {
    s.parse().map_err(|e: capmarkov::Error| e.to_string())
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: capmarkov::Error| e.to_string())
}

fn parse_marker(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: capmarkov::Error| e.to_string())
}

/// Settings after merging built-in defaults, the config file and flags.
pub struct Settings {
    pub tol: Tolerances,
    pub capacity: CapacityConfig,
    pub level: f64,
    pub m: Option<usize>,
    pub trials: usize,
}

impl Settings {
    fn resolve(
        file: &FileConfig,
        common: &Common,
        level: Option<f64>,
        m: Option<usize>,
        trials: Option<usize>,
    ) -> Result<Self, CliError> {
        let mut tol = file.tolerances.unwrap_or_default();
        let t = &common.tol;
        let overrides = [
            (&mut tol.root, t.tol_root),
            (&mut tol.cluster, t.tol_cluster),
            (&mut tol.level, t.tol_level),
            (&mut tol.merge, t.tol_merge),
            (&mut tol.sup, t.tol_sup),
            (&mut tol.verify_oracle, t.tol_verify_oracle),
            (&mut tol.verify_search, t.tol_verify_search),
            (&mut tol.mono, t.tol_mono),
            (&mut tol.subh, t.tol_subh),
            (&mut tol.subh_search, t.tol_subh_search),
            (&mut tol.constant, t.tol_constant),
            (&mut tol.monic, t.tol_monic),
            (&mut tol.cert, t.tol_cert),
            (&mut tol.diam_cap, t.tol_diam_cap),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        tol.validate()?;
        let mut capacity = CapacityConfig {
            seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            ..CapacityConfig::default()
        };
        if let Some(c) = common.candidates.or(file.candidates) {
            capacity.candidates = c;
        }
        if let Some(n) = common.n.or(file.n) {
            capacity = capacity.with_max_n(n);
        }
        let level = level.or(file.level).unwrap_or(1.0);
        if !(level.is_finite() && level > 0.0) {
            return Err(CliError::Config(format!("level must be positive, got {level}")));
        }
        Ok(Settings {
            tol,
            capacity,
            level,
            m: m.or(file.m),
            trials: trials.or(file.trials).unwrap_or(100),
        })
    }
}

/// Rendered output and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let file = FileConfig::from_env()?;
    let (common, outcome) = match &cli.command {
        Command::Verify(a) => {
            let s = Settings::resolve(&file, &a.common, a.level, a.m, None)?;
            let theorem = a.theorem.unwrap_or(if a.set.is_some() { Theorem::One } else { Theorem::Two });
            (&a.common, commands::verify(&a.poly, a.set.as_ref(), theorem, &s, a.common.format)?)
        }
        Command::Capacity(a) => {
            let s = Settings::resolve(&file, &a.common, a.level, a.m, None)?;
            let out = match (&a.set, &a.poly) {
                (Some(set), _) => commands::capacity_of_set(set, a.search, &s, a.common.format)?,
                (None, Some(poly)) => commands::capacity_of_levelset(poly, &s, a.common.format)?,
                (None, None) => return Err(CliError::Usage("one of --set or --poly is required".into())),
            };
            (&a.common, out)
        }
        Command::Levelset(a) => {
            let s = Settings::resolve(&file, &a.common, a.level, a.m, None)?;
            (&a.common, commands::levelset(&a.poly, &s, a.common.format)?)
        }
        Command::Sweep(a) => {
            let s = Settings::resolve(&file, &a.common, None, None, a.trials)?;
            (&a.common, commands::sweep(a.degree as usize, &s, a.common.format)?)
        }
        Command::Deform(a) => {
            let s = Settings::resolve(&file, &a.common, a.level, None, None)?;
            let radius = a.test_radius.unwrap_or(2.4 * a.grid.step());
            (&a.common, commands::deform(&a.poly, a.marker, a.grid, radius, &s, a.common.format)?)
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => std::io::stdout().write_all(outcome.text.as_bytes())?,
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) if outcome.passed => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("capmarkov: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("capmarkov: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }
}
