//! Command-line front end: runs the experiments of the `teichmuller` crate
//! from a JSON config and writes CSV/SVG artifacts plus a JSON report.
//!
//! Exit status is 0 when every asserted tolerance holds, 1 when any fails and
//! 2 for configuration or input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod report;
pub mod svg;

use config::{parse_config, unknown_keys, ExperimentConfig};
use report::{Artifacts, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] teichmuller::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "teich",
    version,
    about = "Period-map and Weil–Petersson experiments on truncated Fourier models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON experiment config; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `out` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Reject unknown config keys instead of warning.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Composition matrix, its blocks and the period point of the configured map.
    PeriodMap,
    /// Ratio of the Siegel metric to the Weil–Petersson metric along cos(nx).
    WpPullback,
    /// Quasisymmetry constant of the configured map over a grid.
    QsEstimate,
    /// Hyperbolic L² norms of monomial harmonic Beltrami differentials.
    BeltramiNorms,
    /// Rank-one Siegel action against the Poincaré disc.
    SiegelDemo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PeriodMap => "period-map",
            Command::WpPullback => "wp-pullback",
            Command::QsEstimate => "qs-estimate",
            Command::BeltramiNorms => "beltrami-norms",
            Command::SiegelDemo => "siegel-demo",
        }
    }
}

/// Config plus the directory relative paths in it are resolved against.
fn load_config(cli: &Cli) -> Result<(ExperimentConfig, PathBuf), CliError> {
    let Some(path) = &cli.config else {
        return Ok((parse_config("{}", cli.strict)?, PathBuf::from(".")));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let config = parse_config(&text, cli.strict)?;
    if !cli.strict {
        if let Ok(doc) = serde_json::from_str(&text) {
            for key in unknown_keys(&doc) {
                eprintln!("warning: ignoring unknown config key {key:?}");
            }
        }
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((config, base))
}

/// Runs one command and writes its artifacts and `report.json`.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let (config, base) = load_config(cli)?;
    let out_dir = match (&cli.out, &config.out) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => base.join(dir),
        (None, None) => PathBuf::from("out"),
    };
    let mut artifacts = Artifacts::new(&out_dir)?;
    let checks = match cli.command {
        Command::PeriodMap => {
            commands::period_map(&config, &config.load_map(&base)?, &mut artifacts)?
        }
        Command::WpPullback => commands::wp_pullback(&config, &mut artifacts)?,
        Command::QsEstimate => {
            commands::qs_estimate(&config, &config.load_map(&base)?, &mut artifacts)?
        }
        Command::BeltramiNorms => commands::beltrami_norms(&config, cli.seed, &mut artifacts)?,
        Command::SiegelDemo => commands::siegel_demo(&config, cli.seed, &mut artifacts)?,
    };
    let dir = artifacts.dir().to_path_buf();
    let mut paths = artifacts.into_paths();
    paths.push(dir.join("report.json"));
    let report = Report {
        command: cli.command.name().to_string(),
        config,
        seed: cli.seed,
        checks,
        artifacts: paths,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    teichmuller::io::write_atomic(&dir.join("report.json"), text.as_bytes())?;
    Ok(report)
}

/// Parses arguments, runs, prints a summary and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for c in &report.checks {
                println!(
                    "{} {}: {:e} (tol {:e})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tol
                );
            }
            for p in &report.artifacts {
                println!("wrote {}", p.display());
            }
            if report.all_pass() {
                EXIT_PASS
            } else {
                let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
                eprintln!("tolerance failures: {}", failed.join(", "));
                EXIT_TOLERANCE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
