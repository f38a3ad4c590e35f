use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lqdg::flow::ReproduceTarget;

#[derive(Debug, Parser)]
#[command(name = "lqdg", version, about = "Equilibria and efficiency indices of scalar LQ differential games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest N solved by the monomial eigenproblem (dimension 2^N).
    #[arg(long, global = true)]
    pub n_cap: Option<usize>,
    /// Riccati residual accepted after polishing.
    #[arg(long, global = true)]
    pub tol_residual: Option<f64>,
    /// Relative tolerance of the monomial consistency check.
    #[arg(long, global = true)]
    pub tol_consistency: Option<f64>,
    /// Relative size of an imaginary part treated as zero.
    #[arg(long, global = true)]
    pub tol_reality: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Game config (TOML).
    #[arg(long, short)]
    pub config: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Eigen method up to the cap, fixed point above it.
    Auto,
    Eigen,
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Feedback,
    OpenLoop,
    Social,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    #[value(name = "N")]
    N,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Feedback Nash equilibria.
    SolveFb {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Open-loop Nash equilibrium.
    SolveOl {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Social optimum of the weighted total cost.
    SolveSocial {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// PoA, PoI, bounds and large-population approximations.
    Indices {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Price of cooperation for the config's lambda matrix.
    Poc {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Integrate the dynamics under a policy profile.
    Simulate {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_enum, default_value_t = Policy::Feedback)]
        policy: Policy,
        /// Integration horizon; defaults to 20 time constants.
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Also write the sampled trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        record_every: usize,
    },
    /// Indices over a range of N for the symmetric game built from player 1.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Flow-control tables and figure data.
    Reproduce {
        #[arg(long, value_parser = parse_target)]
        target: ReproduceTarget,
        /// Largest N in figure datasets.
        #[arg(long, default_value_t = lqdg::flow::DEFAULT_N_MAX)]
        n_max: usize,
    },
}

fn parse_target(s: &str) -> Result<ReproduceTarget, String> {
    s.parse()
}
