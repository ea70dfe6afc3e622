use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use rendezvous_core::{GameConfig, Scoring};

use crate::parse;

/// Largest path count accepted from the command line.
const MAX_CLI_PATHS: usize = 1000;

#[derive(Debug, Parser)]
#[command(
    name = "rendezvous",
    version,
    about = "Quantum and classical strategies for the polar rendezvous game"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for every random draw; drawn from system entropy and printed when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Number of paths per party.
    #[arg(long = "game-m", global = true)]
    pub game_m: Option<usize>,

    /// Largest equatorial separation (degrees) at which the parties see each other.
    #[arg(long = "fov-deg", global = true, allow_negative_numbers = true)]
    pub fov_deg: Option<f64>,

    /// Task matrix, rows separated by ';' and entries by ',' (e.g. "1,-1;-1,1").
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub coeff: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoringArg {
    Geometry,
    Task,
}

impl From<ScoringArg> for Scoring {
    fn from(s: ScoringArg) -> Self {
        match s {
            ScoringArg::Geometry => Scoring::Geometry,
            ScoringArg::Task => Scoring::TaskFunction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// Field of view in degrees.
    Fov,
    /// Offset (degrees) added to every one of Bob's polarizer angles.
    Angle,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QuantumArgs {
    /// Alice's polarizer angle per path, in degrees (default: path k at (k-1)·step).
    #[arg(long, allow_hyphen_values = true)]
    pub angles: Option<String>,

    /// Bob's polarizer angles (default: same as Alice).
    #[arg(long = "bob-angles", allow_hyphen_values = true)]
    pub bob_angles: Option<String>,

    /// Shared two-photon state as HH,HV,VH,VV amplitudes, each `re` or `re:im`.
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact outcome tables, Bell values and success probability of a protocol.
    Exact {
        /// quantum, classical-best, a code pair (HHV/HHV), or a mixture (HHV/HHV@1/2;HVH/HVH@1/2).
        #[arg(long)]
        protocol: Option<String>,
        #[command(flatten)]
        quantum: QuantumArgs,
    },
    /// Best classical strategy by exhaustive search, with local Bell bounds.
    Optimize,
    /// Monte Carlo simulation of the game.
    Simulate {
        /// Same forms as `exact --protocol`.
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        /// Independent random streams; results depend on (seed, shards).
        #[arg(long)]
        shards: Option<usize>,
        #[arg(long, value_enum)]
        scoring: Option<ScoringArg>,
        /// Sweep every path pair exactly instead of sampling.
        #[arg(long = "sweep-exhaustive")]
        sweep_exhaustive: bool,
        #[command(flatten)]
        quantum: QuantumArgs,
    },
    /// Landing points, separations and meetings for every joint choice.
    Geometry,
    /// Quantum and best classical success across a parameter range.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, allow_negative_numbers = true)]
        step: f64,
        #[command(flatten)]
        quantum: QuantumArgs,
    },
}

/// Flat key/value defaults loaded from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub game_m: Option<usize>,
    pub fov_deg: Option<f64>,
    pub coeff: Option<Vec<Vec<i8>>>,
    pub protocol: Option<String>,
    pub strategy: Option<String>,
    pub trials: Option<u64>,
    pub shards: Option<usize>,
    pub scoring: Option<ScoringArg>,
    pub angles: Option<Vec<f64>>,
    pub bob_angles: Option<Vec<f64>>,
    pub state: Option<String>,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Quantum-protocol options after merging flags over the config file.
#[derive(Debug, Clone, Default)]
pub struct QuantumSettings {
    pub angles: Option<Vec<f64>>,
    pub bob_angles: Option<Vec<f64>>,
    pub state: Option<String>,
}

impl QuantumSettings {
    pub fn merge(args: &QuantumArgs, file: &RunConfigFile) -> Result<Self> {
        let angles = match &args.angles {
            Some(s) => Some(parse::angles(s)?),
            None => file.angles.clone(),
        };
        let bob_angles = match &args.bob_angles {
            Some(s) => Some(parse::angles(s)?),
            None => file.bob_angles.clone(),
        };
        Ok(QuantumSettings {
            angles,
            bob_angles,
            state: args.state.clone().or_else(|| file.state.clone()),
        })
    }
}

/// Global options after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    pub seed: Option<u64>,
    pub game: GameConfig,
}

impl Settings {
    pub fn merge(cli: &Cli, file: &RunConfigFile) -> Result<Self> {
        let m = cli.game_m.or(file.game_m);
        let coeff = match &cli.coeff {
            Some(s) => Some(parse::coeff_matrix(s)?),
            None => file.coeff.clone(),
        };
        if let Some(m) = m {
            if m > MAX_CLI_PATHS {
                bail!("--game-m {m} exceeds {MAX_CLI_PATHS}");
            }
        }
        let game = match coeff {
            Some(c) => {
                let g = GameConfig::with_coeff(c)?;
                if let Some(m) = m.filter(|&m| m != g.m()) {
                    bail!("--game-m {m} does not match the {0}×{0} task matrix", g.m());
                }
                g
            }
            None => GameConfig::rendezvous(m.unwrap_or(3))?,
        };
        let fov = cli.fov_deg.or(file.fov_deg).unwrap_or(GameConfig::DEFAULT_FOV_DEG);
        Ok(Settings {
            format: cli.format.or(file.format).unwrap_or(Format::Text),
            seed: cli.seed.or(file.seed),
            game: game.with_fov(fov)?,
        })
    }
}
