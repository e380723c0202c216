mod cli;
mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use opinion_games::Error;
use serde_json::json;

use cli::{Cli, Command};

/// A failed command, grouped by exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Limit(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded { .. } => Failure::Limit(e.to_string()),
            Error::Invariant(_) | Error::NotBestResponse { .. } => {
                Failure::Invariant(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Limit(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Limit(m) | Failure::Invariant(m) => m,
        }
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Gen(_) => "gen",
        Command::Nash(_) => "nash",
        Command::PoaPos(_) => "poa-pos",
        Command::BrRun(_) => "br-run",
        Command::BrExpo(_) => "br-expo",
        Command::Canonicalize(_) => "canonicalize",
        Command::Cutwidth(_) => "cutwidth",
        Command::LogitMix(_) => "logit-mix",
        Command::Spectral(_) => "spectral",
        Command::Bottleneck(_) => "bottleneck",
        Command::CoupleCheck(_) => "couple-check",
        Command::Sweep(_) => "sweep",
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Nash(a) => commands::nash(a),
        Command::PoaPos(a) => commands::poa_pos(a),
        Command::BrRun(a) => commands::br_run(a),
        Command::BrExpo(a) => commands::br_expo(a),
        Command::Canonicalize(a) => commands::canonicalize(a),
        Command::Cutwidth(a) => commands::cutwidth(a),
        Command::LogitMix(a) => commands::logit_mix(a),
        Command::Spectral(a) => commands::spectral(a),
        Command::Bottleneck(a) => commands::bottleneck(a),
        Command::CoupleCheck(a) => commands::couple_check(a),
        Command::Sweep(a) => commands::sweep(a),
    }?;
    let report = json!({
        "command": name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
        "config": outcome.config,
        "results": outcome.results,
        "wall_time_ms": started.elapsed().as_secs_f64() * 1e3,
    });
    let text = serde_json::to_string_pretty(&report).expect("json values serialize");
    let target = match &cli.command {
        Command::LogitMix(a) => a.out.as_ref().or(cli.report.as_ref()),
        _ => cli.report.as_ref(),
    };
    match target {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("xlab {}: {}", name(&cli.command), f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
