use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrt_core::montecarlo::Epsilon;
use lrt_core::TestKind;

#[derive(Debug, Parser)]
#[command(
    name = "lrt",
    version,
    about = "Likelihood ratio tests for multivariate normal data, with checks on the chi-squared approximation",
    after_help = "Exit status: 0 chisq-ok, 1 bartlett-ok, 2 neither (diagnose); \
                  0 success (other commands); 64 usage, 65 bad data, 70 internal, 74 I/O."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bias diagnostics and a recommendation for one layout.
    Diagnose(DiagnoseArgs),
    /// Evaluate the statistic and p-values on data files.
    Stat(StatArgs),
    /// Monte Carlo type-I error sweep over p = floor(n^eps).
    Simulate(SimulateArgs),
    /// Closed-form bias table over an (n, eps) grid, no simulation.
    BiasTable(BiasTableArgs),
}

/// Layout of a problem given on the command line.
#[derive(Debug, Clone, Args)]
pub struct LayoutArgs {
    /// Test: I-VII, 1-7, or a name such as `sphericity`.
    #[arg(long)]
    pub test: TestKind,

    /// Sample size; per group when used with --k.
    #[arg(long)]
    pub n: Option<usize>,

    /// Dimension.
    #[arg(long)]
    pub p: Option<usize>,

    /// Number of equal groups of size --n (tests IV-VI).
    #[arg(long)]
    pub k: Option<usize>,

    /// Group sizes n_1,...,n_k (tests IV-VI).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,

    /// Block dimensions p_1,...,p_k (test VII).
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnosticArgs {
    /// Nominal level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Largest acceptable bias in the type-I error.
    #[arg(long, default_value_t = lrt_core::asymptotics::DEFAULT_THRESHOLD)]
    pub threshold: f64,

    /// Level below which the theta-based bias is trusted on its own.
    #[arg(long, default_value_t = lrt_core::asymptotics::DEFAULT_C)]
    pub c: f64,

    /// Cutoff on the growth-rate ratio for the boundary verdict.
    #[arg(long, default_value_t = lrt_core::asymptotics::DEFAULT_CUTOFF)]
    pub cutoff: f64,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub layout: LayoutArgs,

    #[command(flatten)]
    pub diagnostics: DiagnosticArgs,

    /// Also write the report as a one-row CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatArgs {
    /// Test: I-VII, 1-7, or a name.
    #[arg(long)]
    pub test: TestKind,

    /// Data files, one row per observation; one file per group for tests IV-VI.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,

    /// Block dimensions p_1,...,p_k (test VII).
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,

    /// Hypothesised mean, subtracted before testing (tests I and III).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub mu0: Vec<f64>,

    /// File holding the hypothesised covariance; data are whitened by it
    /// (tests I-III).
    #[arg(long)]
    pub sigma0: Option<PathBuf>,

    /// Field delimiter; detected from the first data line when omitted.
    #[arg(long)]
    pub delimiter: Option<char>,

    #[command(flatten)]
    pub diagnostics: DiagnosticArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Type-I error per cell.
    Sweep,
    /// Type-I error against the predicted bias.
    Bias,
    /// Both tables from the same replications.
    Both,
}

#[derive(Debug, Default, Args)]
pub struct SimulateArgs {
    /// TOML config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub test: Option<TestKind>,

    /// Sample sizes (per group for tests IV-VI).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,

    /// Exponents as num/den, e.g. 8/24,10/24.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<Epsilon>,

    #[arg(long)]
    pub reps: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long)]
    pub alpha: Option<f64>,

    /// Groups (IV-VI) or blocks (VII) per cell.
    #[arg(long)]
    pub groups: Option<usize>,

    #[arg(long)]
    pub c: Option<f64>,

    #[arg(long, value_enum)]
    pub mode: Option<SimMode>,

    /// Output directory (also settable through OUTPUT_DIR).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BiasTableArgs {
    #[arg(long)]
    pub test: TestKind,

    /// Sample sizes (per group for tests IV-VI).
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,

    /// Exponents as num/den; defaults to 6/24,...,23/24.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<Epsilon>,

    /// Groups (IV-VI) or blocks (VII) per cell.
    #[arg(long, default_value_t = lrt_core::montecarlo::DEFAULT_GROUPS)]
    pub groups: usize,

    #[command(flatten)]
    pub diagnostics: DiagnosticArgs,

    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
