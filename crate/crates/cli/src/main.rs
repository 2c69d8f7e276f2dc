//! `semitoric`: spectra, invariants and plots for the coupled spin-oscillator.

mod commands;
mod config;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{thread_cap, Flags, Settings, UsageError};

#[derive(Debug, Parser)]
#[command(name = "semitoric", version, about = "Coupled spin-oscillator: spectra, invariants, plots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Joint spectrum of (Ĵ, Ĥ) over a λ range.
    Spectrum,
    /// Spectrum of Ĥ on ker(Ĵ − 1).
    Sigma,
    /// Taylor series invariants a1, a2.
    Invariants,
    /// Recover B22 and a2 from spectra at n = 2^k + 1.
    Recover,
    /// Reference polygon (json) or the developed joint spectrum (csv, svg).
    Polygon,
    /// Classical consistency checks.
    ClassicalVerify,
}

fn run(cli: &Cli) -> anyhow::Result<Vec<commands::Violation>> {
    let cap = thread_cap(std::env::var("SEMITORIC_THREADS").ok().as_deref())?;
    semitoric::exec::init_thread_cap(cap);
    let settings = Settings::resolve(&cli.flags)?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&settings),
        Command::Sigma => commands::sigma(&settings),
        Command::Invariants => commands::invariants(&settings),
        Command::Recover => commands::recover(&settings),
        Command::Polygon => commands::polygon(&settings),
        Command::ClassicalVerify => commands::classical_verify(&settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in violations {
                eprintln!("invariant violated in {}: {}", v.module, v.detail);
            }
            ExitCode::from(1)
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
