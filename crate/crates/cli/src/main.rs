//! `homofair`: command-line workbench around the group-free fairness
//! library. Subcommands mirror the experiment pipelines (kernel inference,
//! inequality bounds, classification post-processing, information access,
//! ranking trade-offs, graph statistics) and emit plot-ready CSV plus a
//! JSON run manifest.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible or
//! failed optimization.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "homofair", version, about = "Group-free fairness workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer a similarity kernel from network structure (spectral
    /// embedding + cosine kernel) and export it with its embedding.
    Kernel(commands::kernel::KernelArgs),
    /// Sweep the confounded-kernel inequality bounds over the label gap.
    Bounds(commands::bounds::BoundsArgs),
    /// Post-process binary labels under a minimum smoothed-exposure
    /// constraint, sweeping the threshold.
    Classify(commands::classify::ClassifyArgs),
    /// Greedy seed selection for fair information access.
    Influence(commands::influence::InfluenceArgs),
    /// Utility/fairness trade-off sweep for exposure-fair ranking.
    Rank(commands::rank::RankArgs),
    /// Graph ingestion, preprocessing, and assortativity statistics.
    Assort(commands::assort::AssortArgs),
}

/// Shared graph source and preprocessing flags.
#[derive(Args, Debug, serde::Serialize)]
pub struct GraphArgs {
    /// Edge-list file: `u<sep>v[<sep>weight]` per line.
    #[arg(long, conflicts_with = "sbm_blocks")]
    pub graph: Option<PathBuf>,

    /// The edge list enumerates directed links (reciprocal pairs merge).
    #[arg(long)]
    pub directed: bool,

    /// Node labels CSV: `node_id,label`.
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Sample an SBM instead of loading a file: comma-separated block sizes.
    #[arg(long, value_delimiter = ',')]
    pub sbm_blocks: Vec<usize>,

    /// SBM intra-block edge probability.
    #[arg(long, default_value_t = 0.2)]
    pub p_in: f64,

    /// SBM inter-block edge probability.
    #[arg(long, default_value_t = 0.05)]
    pub p_out: f64,

    /// Drop nodes with fewer neighbors than this.
    #[arg(long, default_value_t = 0)]
    pub min_degree: usize,

    /// Drop groups smaller than this.
    #[arg(long, default_value_t = 0)]
    pub min_group_size: usize,

    /// Drop users with fewer ratings than this (needs --ratings).
    #[arg(long, default_value_t = 0)]
    pub min_ratings: u64,

    /// Ratings CSV `user_id,item_id[,count]`.
    #[arg(long)]
    pub ratings: Option<PathBuf>,

    /// Keep all components instead of the largest one.
    #[arg(long)]
    pub keep_disconnected: bool,
}

/// Failure classes mapped onto exit codes.
pub enum Failure {
    Usage(String),
    Data(String),
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Infeasible(m) => m,
        }
    }
}

impl From<homofair::Error> for Failure {
    fn from(e: homofair::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(format!("{e:#}"))
    }
}

/// Resolves the effective seed: explicit flag, then HOMOFAIR_SEED, then 0.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("HOMOFAIR_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Kernel(args) => commands::kernel::run(args),
        Command::Bounds(args) => commands::bounds::run(args),
        Command::Classify(args) => commands::classify::run(args),
        Command::Influence(args) => commands::influence::run(args),
        Command::Rank(args) => commands::rank::run(args),
        Command::Assort(args) => commands::assort::run(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
