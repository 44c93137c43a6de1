//! Command-line front end: criteria on moments or named states, dataset
//! reproduction, and end-to-end sampling of the multicopy readout.

pub mod commands;
pub mod config;
pub mod reproduce;
pub mod state;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{CommandSpec, FormatArg, RunConfig, StateSpec, Target};

#[derive(Debug, Parser)]
#[command(name = "ptmoment", version, about = "PT-moment entanglement criteria and multicopy readout simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[command(flatten)]
    pub state: StateSpec,
    /// Per-mode Fock cutoff.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Output file; defaults to $PTMOMENT_OUT_DIR/<name>.<format> or standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every applicable criterion on explicit moments or a named state.
    Criteria {
        #[arg(long, allow_hyphen_values = true)]
        p2: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        p3: Option<f64>,
        /// Full moment list `1, p2, p3, ...`.
        #[arg(long, allow_hyphen_values = true)]
        moments: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the dataset behind a figure or table.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Largest sample size for sampling targets.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        repetitions: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the n-copy readout of a state and estimate p_n.
    Sample {
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        repetitions: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Execute a JSON run configuration.
    Run { config: PathBuf },
}

fn with_common(command: CommandSpec, common: Common) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.state = common.state;
    cfg.cutoff = common.cutoff;
    cfg.seed = common.seed;
    cfg.format = common.format;
    cfg.out = common.out;
    cfg
}

impl Cli {
    /// Builds the validated run configuration for this invocation.
    pub fn into_config(self) -> Result<RunConfig> {
        let cfg = match self.command {
            Command::Criteria { p2, p3, moments, common } => {
                let explicit = match (moments, p2, p3) {
                    (Some(text), None, None) => Some(
                        text.parse::<ptmoment::criteria::PtMomentVector>()
                            .context("parsing --moments")?
                            .moments()
                            .to_vec(),
                    ),
                    (None, Some(p2), p3) => Some(std::iter::once(1.0).chain(Some(p2)).chain(p3).collect()),
                    (None, None, None) => None,
                    _ => anyhow::bail!("use either --moments or --p2/--p3, and --p3 only together with --p2"),
                };
                with_common(CommandSpec::Criteria { moments: explicit }, common)
            }
            Command::Reproduce { target, k, repetitions, common } => {
                with_common(CommandSpec::Reproduce { target, k, repetitions }, common)
            }
            Command::Sample { copies, k, repetitions, common } => {
                with_common(CommandSpec::Sample { copies, k, repetitions }, common)
            }
            Command::Run { config } => {
                let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
                RunConfig::from_json(&text)?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses, executes and emits; returns the written path, if any.
pub fn run(cli: Cli) -> Result<Option<PathBuf>> {
    let cfg = cli.into_config()?;
    let record = commands::execute(&cfg)?;
    commands::emit(&record, &cfg)
}
