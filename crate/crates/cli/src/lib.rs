//! Command-line frontend: run the simulated table, check the algebra and
//! the optical settings, list the tested states.

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use entrocon::photonlab::{Mode, NoiseModel};

pub use commands::{cmd_run, cmd_states_list, cmd_verify, execute, render, Outcome, VerifyTarget};
pub use config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "entrocon", version, about = "Entropic contextuality test on a simulated photonic four-level system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the measurement table for a set of states.
    Run(RunArgs),
    /// Check the observables, the classical model or the optical settings.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
    },
    /// Tested states.
    States {
        #[command(subcommand)]
        action: StatesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum StatesAction {
    List,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Comma-separated labels (Psi1..Psi15, rho16..rho26) or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub states: Vec<String>,
    #[arg(long, default_value_t = entrocon::photonlab::DEFAULT_SHOTS)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `none`, `depol:<p>` or `depol:default`, optionally `,prep:<p>` and `,jitter:<deg>`.
    #[arg(long, default_value = "depol:default")]
    pub noise: NoiseModel,
    #[arg(long, default_value = "sampled")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = entrocon::photonlab::DEFAULT_RESAMPLES)]
    pub resamples: usize,
    #[arg(long)]
    pub threads: Option<usize>,
    /// TOML file whose keys override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let flags = RunConfig {
            states: self.states.clone(),
            shots: self.shots,
            seed: self.seed,
            noise: self.noise,
            mode: self.mode,
            format: self.format,
            output: self.output.clone(),
            resamples: self.resamples,
            threads: self.threads,
        };
        match &self.config {
            Some(path) => flags.overlay_file(path),
            None => Ok(flags),
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Run(args) => cmd_run(&args.to_config()?),
        Command::Verify { target } => cmd_verify(*target),
        Command::States { action: StatesAction::List } => cmd_states_list(),
    }
}
