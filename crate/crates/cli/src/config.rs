//! Simulation settings from a TOML file, overridden by flags.
//!
//! ```toml
//! [simulation]
//! test = "III"
//! alpha = 0.05
//! reps = 1000
//! mode = "sweep"
//! threads = 4
//!
//! [grid]
//! n = [500]
//! epsilon = ["8/24", "10/24", "12/24"]
//!
//! [seeds]
//! master = 12345
//!
//! [output]
//! dir = "results"
//! ```

use std::path::{Path, PathBuf};

use lrt_core::montecarlo::{Epsilon, SimConfig, DEFAULT_BIAS_REPS, DEFAULT_SWEEP_REPS};
use lrt_core::special::Probability;
use lrt_core::TestKind;
use serde::Deserialize;

use crate::args::{SimMode, SimulateArgs};
use crate::error::{CliError, Result};

pub const OUTPUT_DIR_ENV: &str = "OUTPUT_DIR";
pub const DEFAULT_MASTER_SEED: u64 = 12345;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub seeds: SeedsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub test: Option<String>,
    pub alpha: Option<f64>,
    pub reps: Option<usize>,
    pub mode: Option<SimMode>,
    pub groups: Option<usize>,
    pub c: Option<f64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Option<Vec<usize>>,
    pub epsilon: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsSection {
    pub master: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Everything `simulate` needs after merging file, environment and flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub mode: SimMode,
    pub out_dir: PathBuf,
}

/// The grid used when none is given: `6/24, 7/24, ..., 23/24`.
pub fn default_epsilons() -> Vec<Epsilon> {
    (6..=23)
        .map(|k| Epsilon::new(k, 24).expect("k < 24"))
        .collect()
}

fn parse_test(s: &str) -> Result<TestKind> {
    s.parse().map_err(CliError::usage)
}

impl RunConfig {
    /// Precedence, highest first: flags, `OUTPUT_DIR` (output directory
    /// only), the config file, built-in defaults.
    pub fn resolve(args: &SimulateArgs, env_out: Option<PathBuf>) -> Result<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let s = &file.simulation;

        let test = match (args.test, &s.test) {
            (Some(t), _) => t,
            (None, Some(name)) => parse_test(name)?,
            (None, None) => {
                return Err(CliError::Usage(
                    "no test given (--test or simulation.test)".into(),
                ))
            }
        };
        let mode = args.mode.or(s.mode).unwrap_or(SimMode::Sweep);
        let master_seed = args
            .seed
            .or(file.seeds.master)
            .unwrap_or(DEFAULT_MASTER_SEED);

        let mut sim = SimConfig::new(test, master_seed);
        let default_reps = match mode {
            SimMode::Sweep => DEFAULT_SWEEP_REPS,
            SimMode::Bias | SimMode::Both => DEFAULT_BIAS_REPS,
        };
        sim.reps = args.reps.or(s.reps).unwrap_or(default_reps);
        if let Some(a) = args.alpha.or(s.alpha) {
            sim.alpha = Probability::level(a).map_err(CliError::usage)?;
        }
        if let Some(g) = args.groups.or(s.groups) {
            sim.groups = g;
        }
        if let Some(c) = args.c.or(s.c) {
            sim.c = c;
        }
        sim.threads = args.threads.or(s.threads).unwrap_or(0);

        sim.n_values = if !args.n.is_empty() {
            args.n.clone()
        } else {
            file.grid.n.clone().unwrap_or_default()
        };
        if sim.n_values.is_empty() {
            return Err(CliError::Usage(
                "no sample sizes given (--n or grid.n)".into(),
            ));
        }
        sim.epsilon_grid = if !args.eps.is_empty() {
            args.eps.clone()
        } else if let Some(list) = &file.grid.epsilon {
            list.iter()
                .map(|e| e.parse().map_err(CliError::usage))
                .collect::<Result<_>>()?
        } else {
            default_epsilons()
        };
        sim.validate().map_err(CliError::usage)?;

        let out_dir = args
            .out
            .clone()
            .or(env_out)
            .or(file.output.dir)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(Self { sim, mode, out_dir })
    }
}
