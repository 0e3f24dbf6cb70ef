//! `kappax`: agreement statistics for multi-label classifications.

mod input;
mod report;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Chance-corrected agreement for raters who may pick several categories.
#[derive(Debug, Parser)]
#[command(name = "kappax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generalized kappa with optional weights and availability rules.
    Generalized(RunArgs),
    /// Fleiss' kappa (one category per rater and subject, fixed panel size).
    Fleiss(RunArgs),
    /// Mean of per-category Cohen's kappas (two raters).
    CohenAveraged(RunArgs),
    /// Cohen's kappa from pooled per-category agreement (two raters).
    CohenPooled(RunArgs),
    /// Proportional-overlap (Jaccard) kappa.
    Mezzich(RunArgs),
    /// Chance-corrected one-way intraclass correlation.
    Icc(RunArgs),
    /// Chance-corrected Spearman rank correlation.
    Rank(RunArgs),
    /// Recompute a JSON report from its recorded inputs and compare.
    Verify {
        /// A report written with `--format json`.
        report: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Generalized,
    Fleiss,
    CohenAveraged,
    CohenPooled,
    Mezzich,
    Icc,
    Rank,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Generalized => "generalized",
            Method::Fleiss => "fleiss",
            Method::CohenAveraged => "cohen-averaged",
            Method::CohenPooled => "cohen-pooled",
            Method::Mezzich => "mezzich",
            Method::Icc => "icc",
            Method::Rank => "rank",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Selection events, `subject,rater,category` (for `rank` also
    /// `subject,rater,category,rank_group`).
    #[arg(long)]
    pub ratings: PathBuf,
    /// Which raters rated which subjects, `subject,rater`. Without it every
    /// rater is taken to have rated every subject.
    #[arg(long)]
    pub roster: Option<PathBuf>,
    /// Availability rules (JSON); generalized only.
    #[arg(long)]
    pub hierarchy: Option<PathBuf>,
    /// Category weights or scores (JSON); generalized only.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Category ids, one per line, in report order.
    #[arg(long)]
    pub categories: Option<PathBuf>,
    /// Number of bootstrap replicates for a confidence interval.
    #[arg(long, value_name = "N")]
    pub bootstrap: Option<usize>,
    /// Bootstrap seed.
    #[arg(long, env = "KAPPAX_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Bootstrap confidence level.
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generalized(args) => run::run(Method::Generalized, &args),
        Command::Fleiss(args) => run::run(Method::Fleiss, &args),
        Command::CohenAveraged(args) => run::run(Method::CohenAveraged, &args),
        Command::CohenPooled(args) => run::run(Method::CohenPooled, &args),
        Command::Mezzich(args) => run::run(Method::Mezzich, &args),
        Command::Icc(args) => run::run(Method::Icc, &args),
        Command::Rank(args) => run::run(Method::Rank, &args),
        Command::Verify { report } => verify::verify(&report),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(run::exit_code(&err))
        }
    }
}
