mod cli;
mod commands;
mod config;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::Outcome;
use crate::config::RunConfig;

const EXIT_INPUT: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;

fn init_threads(threads: usize) -> Result<()> {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Synth(args) => commands::synth(&args),
        Command::GraphCheck(args) => {
            let (cfg, _) = RunConfig::resolve(&args.common, "graph-check")?;
            commands::graph_check(&cfg, &args)
        }
        Command::Asp(args) => {
            let (cfg, prov) = RunConfig::resolve(&args, "asp")?;
            init_threads(cfg.threads)?;
            commands::asp(&cfg, &prov)
        }
        Command::Sweep(args) => {
            let (cfg, prov) = RunConfig::resolve(&args, "sweep")?;
            init_threads(cfg.threads)?;
            commands::sweep(&cfg, &prov)
        }
        Command::Stats(args) => {
            let (cfg, prov) = RunConfig::resolve(&args, "stats")?;
            init_threads(cfg.threads)?;
            commands::stats(&cfg, &prov)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => {
            eprintln!("error: solver did not converge");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
