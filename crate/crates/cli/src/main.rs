//! `rendezvous` command-line tool.
//!
//! Exit status: 0 on success, 1 for usage or validation errors, 2 when a
//! probability input fails a numerical check (unnormalized state or
//! weights, out-of-range probability).

mod cli;
mod commands;
mod output;
mod parse;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use cli::{Cli, Command, QuantumSettings, RunConfigFile, Settings};
use commands::{SimulateArgs, SweepArgs};

fn execute(cli: Cli) -> Result<String> {
    let file = match &cli.config {
        Some(path) => RunConfigFile::load(path)?,
        None => RunConfigFile::default(),
    };
    let settings = Settings::merge(&cli, &file)?;
    let cfg = &settings.game;
    let doc = match &cli.command {
        Command::Exact { protocol, quantum } => {
            let protocol = protocol
                .clone()
                .or_else(|| file.protocol.clone())
                .unwrap_or_else(|| "quantum".into());
            commands::exact(cfg, &protocol, &QuantumSettings::merge(quantum, &file)?)?
        }
        Command::Optimize => commands::optimize(cfg)?,
        Command::Simulate {
            strategy,
            trials,
            shards,
            scoring,
            sweep_exhaustive,
            quantum,
        } => {
            let strategy = strategy
                .clone()
                .or_else(|| file.strategy.clone())
                .unwrap_or_else(|| "quantum".into());
            let seed = match settings.seed {
                Some(s) => s,
                None if *sweep_exhaustive => 0,
                None => {
                    let s = rand::random();
                    eprintln!("seed: {s}");
                    s
                }
            };
            let args = SimulateArgs {
                strategy: &strategy,
                trials: trials.or(file.trials).unwrap_or(100_000),
                shards: shards.or(file.shards).unwrap_or(1),
                scoring: scoring.or(file.scoring).map(Into::into).unwrap_or_default(),
                exhaustive: *sweep_exhaustive,
                seed,
            };
            commands::simulate(cfg, &args, &QuantumSettings::merge(quantum, &file)?)?
        }
        Command::Geometry => commands::geometry(cfg)?,
        Command::Sweep {
            param,
            from,
            to,
            step,
            quantum,
        } => {
            let args = SweepArgs {
                param: *param,
                from: *from,
                to: *to,
                step: *step,
            };
            commands::sweep(cfg, &args, &QuantumSettings::merge(quantum, &file)?)?
        }
    };
    output::render(&doc, settings.format)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err.chain().any(|e| {
        e.downcast_ref::<rendezvous_core::Error>()
            .is_some_and(rendezvous_core::Error::is_numerical)
    });
    if numerical {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
