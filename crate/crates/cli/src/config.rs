//! Command-line flags. Every run is fully described by its flags; there are
//! no config files or environment variables.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discrepancy_core::HapMode;

#[derive(Debug, Parser)]
#[command(name = "disclab", version, about = "Discrepancy of subcube, character and HAP systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance or the embedding witness.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Discrepancy of an instance.
    Disc {
        #[command(subcommand)]
        method: DiscCommand,
    },
    /// Hereditary discrepancy of an instance.
    Herdisc {
        #[command(subcommand)]
        method: HerdiscCommand,
    },
    /// Determinant lower bound on hereditary discrepancy, with certificate.
    Detlb(DetlbArgs),
    /// Maximal-minor search on a wide matrix.
    Maxdet(MaxdetArgs),
    /// Constructive colorings.
    Color {
        #[command(subcommand)]
        method: ColorCommand,
    },
    /// Evaluate a coloring on an instance.
    Eval(EvalArgs),
    /// Exact identity and certificate checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Artifact path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Prefix,
    Multiples,
}

impl From<ModeArg> for HapMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Prefix => HapMode::Prefix,
            ModeArg::Multiples => HapMode::Multiples,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Subcubes,
    Characters,
    Hap,
    Sylvester,
}

/// An instance is read from `--input` or generated from `--family` and its
/// parameters.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// A `set_system` or `sign_matrix` artifact.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Character weight; defaults to d/8 when 8 divides d.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Sylvester order exponent.
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    Subcubes {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    Characters {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    Hap {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    Sylvester {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    Embed {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum DiscCommand {
    Exact {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum HerdiscCommand {
    Exact {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Largest number of columns accepted (at most 16).
        #[arg(long, default_value_t = 16)]
        cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertStrategyArg {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Args)]
pub struct DetlbArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Largest submatrix order; defaults to min(rows, cols).
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub strategy: CertStrategyArg,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetStrategyArg {
    Exhaustive,
    RandomSwap,
}

#[derive(Debug, Args)]
pub struct MaxdetArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub strategy: DetStrategyArg,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    /// Target for |det|^(1/M); defaults to sqrt(N) * C(N,M)^(-1/(2M)).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum ColorCommand {
    BeckFiala {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    Ternary {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    Improve {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Starting `coloring` artifact; all +1 when absent.
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        passes: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// A `coloring` artifact.
    #[arg(long)]
    pub coloring: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Character expansion over subcubes, for one index or all of one weight.
    Chars {
        #[arg(long)]
        d: usize,
        #[arg(long, required_unless_present = "v")]
        k: Option<usize>,
        /// Character index as a binary string of length d.
        #[arg(long)]
        v: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    Embed {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    Transfer {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    Cert {
        #[command(flatten)]
        instance: InstanceArgs,
        /// A `lower_bound_cert` artifact.
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}
