//! `gll`: Lipschitz norms and multiplication operators on infinite graphs.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Command, RunArgs, RunConfig};

#[derive(Parser)]
#[command(name = "gll", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full multiplication-operator report for --symbol, one JSON line per radius.
    /// CSV: `shell,n,value` profiles at the largest radius.
    /// Exits 2 when the operator is certified unbounded.
    Analyze(RunArgs),
    /// Lipschitz norm of --function, one JSON line per radius.
    /// CSV: `shell,n,value` profiles at the largest radius.
    Norm(RunArgs),
    /// Finitely supported approximation of --function within --eps.
    /// CSV: `site,re,im` for the nonzero values.
    Approx(RunArgs),
    /// Point-spectrum sample and certified limit points of --symbol.
    /// CSV: `kind,site,re,im` at the largest radius.
    Spectrum(RunArgs),
    /// Oracle sweep over --symbol (or a default set), one JSON line per check.
    /// CSV: `check,family,symbol,radius,status,lhs,rhs,witness`.
    /// Exits 2 when any check fails.
    Verify(RunArgs),
    /// Print the run configuration a command would use, without running it.
    Config {
        #[arg(value_enum)]
        command: Command,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Replay a configuration written by `config`.
    Run { path: PathBuf },
}

fn config_of(cmd: Cmd) -> Result<(RunConfig, bool), String> {
    Ok(match cmd {
        Cmd::Analyze(a) => (RunConfig::from_args(Command::Analyze, a), false),
        Cmd::Norm(a) => (RunConfig::from_args(Command::Norm, a), false),
        Cmd::Approx(a) => (RunConfig::from_args(Command::Approx, a), false),
        Cmd::Spectrum(a) => (RunConfig::from_args(Command::Spectrum, a), false),
        Cmd::Verify(a) => (RunConfig::from_args(Command::Verify, a), false),
        Cmd::Config { command, args } => (RunConfig::from_args(command, args), true),
        Cmd::Run { path } => {
            let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let cfg = serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?;
            (cfg, false)
        }
    })
}

fn run(cli: Cli) -> Result<u8, String> {
    let (cfg, print_only) = config_of(cli.command)?;
    let (text, code) = if print_only {
        (serde_json::to_string_pretty(&cfg).expect("config serializes") + "\n", 0)
    } else {
        let out = commands::execute(&cfg).map_err(|e| e.to_string())?;
        (out.text, out.code)
    };
    match &cfg.out {
        Some(path) if !print_only => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?
        }
        _ => print!("{text}"),
    }
    Ok(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
