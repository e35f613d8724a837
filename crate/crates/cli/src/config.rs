//! Experiment configuration: command-line flags merged over an optional TOML file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semilag::SchemeKind;
use serde::Deserialize;

use crate::error::{CliError, Result};

/// How `Δt` and `h` are tied together in a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `Δt = h`; levels are `M`.
    Coupled,
    /// `Δt` fixed; levels are `M`.
    FixedDt,
    /// `h` fixed; levels are `N`.
    FixedH,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Coupled => "coupled",
            Regime::FixedDt => "fixed-dt",
            Regime::FixedH => "fixed-h",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Converge,
    Phase,
}

pub const COARSE_LEVELS: [usize; 3] = [80, 160, 320];
pub const FULL_LEVELS: [usize; 5] = [80, 160, 320, 640, 1280];
/// Fixed `Δt` or `h` used by `--full` in the fixed regimes.
pub const FULL_FIXED: f64 = 1e-4;
pub const MIN_MTILDE: usize = 100;

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub schemes: Vec<SchemeKind>,
    pub regime: Regime,
    /// `M` values (coupled, fixed-dt) or `N` values (fixed-h).
    pub levels: Vec<usize>,
    /// The fixed `Δt` or `h` of the fixed regimes.
    pub fixed: Option<f64>,
    pub mtilde: usize,
    pub mu: f64,
    /// Grid size of the phase study.
    pub m: usize,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Convergence study with default sampling for `regime`.
    pub fn converge(schemes: Vec<SchemeKind>, regime: Regime, levels: Vec<usize>, fixed: Option<f64>) -> Self {
        Self {
            command: Command::Converge,
            schemes,
            regime,
            levels,
            fixed,
            mtilde: semilag::norms::DEFAULT_MTILDE,
            mu: 0.4,
            m: 40,
            out: None,
            svg: None,
        }
    }

    /// Phase study over all four schemes.
    pub fn phase(mu: f64, m: usize) -> Self {
        Self {
            command: Command::Phase,
            schemes: SchemeKind::ALL.to_vec(),
            regime: Regime::Coupled,
            levels: vec![],
            fixed: None,
            mtilde: semilag::norms::DEFAULT_MTILDE,
            mu,
            m,
            out: None,
            svg: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.schemes.is_empty() {
            return bad("no schemes selected".into());
        }
        match self.command {
            Command::Converge => {
                if self.levels.is_empty() {
                    return bad("no resolution levels".into());
                }
                if self.levels[0] == 0 || self.levels.windows(2).any(|w| w[1] <= w[0]) {
                    return bad(format!("levels {:?} must be positive and strictly increasing", self.levels));
                }
                if self.mtilde < MIN_MTILDE {
                    return bad(format!("mtilde {} is below {MIN_MTILDE}", self.mtilde));
                }
                match (self.regime, self.fixed) {
                    (Regime::Coupled, _) => {}
                    (r, None) => return bad(format!("regime {r} needs --fixed")),
                    (r, Some(v)) if !(v > 0.0 && v <= 1.0) => {
                        return bad(format!("fixed value {v} for regime {r} must lie in (0, 1]"))
                    }
                    _ => {}
                }
            }
            Command::Phase => {
                if self.m < 4 {
                    return bad(format!("phase grid M = {} must be at least 4", self.m));
                }
                if !self.mu.is_finite() {
                    return bad(format!("mu = {} is not finite", self.mu));
                }
            }
        }
        Ok(())
    }
}

/// Semi-Lagrangian advection experiments: convergence tables and phase-shift sweeps.
#[derive(Debug, Parser)]
#[command(name = "semilag", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Convergence study on the built-in benchmark problem.
    Converge(ExperimentArgs),
    /// Phase-shift sweep of one step on Fourier modes.
    Phase(ExperimentArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// Scheme to run; repeat for several.
    #[arg(long = "scheme", value_parser = parse_scheme)]
    pub schemes: Vec<SchemeKind>,
    #[arg(long, value_enum)]
    pub regime: Option<Regime>,
    /// Comma-separated M values (or N values for fixed-h).
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    /// Fixed Δt or h, e.g. `1e-4` or `1/2048`.
    #[arg(long, value_parser = parse_number)]
    pub fixed: Option<f64>,
    /// Half the number of error sample points.
    #[arg(long)]
    pub mtilde: Option<usize>,
    /// CFL number of the phase study.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Grid size of the phase study.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG chart path (phase only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Use levels up to 1280 and, in fixed regimes, a default of 1e-4 (slow).
    #[arg(long)]
    pub full: bool,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schemes: Option<Vec<String>>,
    pub regime: Option<Regime>,
    pub levels: Option<Vec<usize>>,
    pub fixed: Option<f64>,
    pub mtilde: Option<usize>,
    pub mu: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub full: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| CliError::ParseConfig { path: path.into(), source })
    }
}

fn parse_scheme(s: &str) -> std::result::Result<SchemeKind, String> {
    SchemeKind::from_str(s).map_err(|e| e.to_string())
}

/// Parses a float or a fraction `a/b`.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            a / b
        }
        None => s.parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

impl ExperimentArgs {
    /// Merges these flags over the config file (if any) and the defaults.
    pub fn resolve(self, command: Command) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let file_schemes = file
            .schemes
            .map(|v| v.iter().map(|s| parse_scheme(s).map_err(CliError::Config)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let full = self.full || file.full.unwrap_or(false);
        let regime = self.regime.or(file.regime).unwrap_or(Regime::Coupled);
        let schemes = if !self.schemes.is_empty() {
            self.schemes
        } else if let Some(s) = file_schemes {
            s
        } else {
            match command {
                Command::Converge => vec![SchemeKind::Cip, SchemeKind::Spline],
                Command::Phase => SchemeKind::ALL.to_vec(),
            }
        };
        let default_levels = if full { FULL_LEVELS.to_vec() } else { COARSE_LEVELS.to_vec() };
        let default_fixed = (full && regime != Regime::Coupled).then_some(FULL_FIXED);
        let cfg = ExperimentConfig {
            command,
            schemes,
            regime,
            levels: self.levels.or(file.levels).unwrap_or(default_levels),
            fixed: self.fixed.or(file.fixed).or(default_fixed),
            mtilde: self.mtilde.or(file.mtilde).unwrap_or(semilag::norms::DEFAULT_MTILDE),
            mu: self.mu.or(file.mu).unwrap_or(0.4),
            m: self.m.or(file.m).unwrap_or(40),
            out: self.out.or(file.out),
            svg: self.svg.or(file.svg),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
