//! `fglc` — compute formal-group-law data and verify the identity catalog.
//!
//! Two entry points: `compute <command>` prints the requested object as
//! canonical JSON; `verify <identity>` runs one catalog entry and prints
//! a report. Stdout is byte-identical across runs for identical inputs;
//! timing goes to stderr. Exit codes: 0 success or pass, 1 a verified
//! identity failed, 2 usage or validation error.

mod common;
mod compute;
mod verify;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "fglc",
    version,
    about = "Exact calculator and identity verifier for formal-group-law calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    /// Compute a series, law, class, or table and print it as JSON.
    Compute {
        #[command(subcommand)]
        what: compute::ComputeCmd,
    },
    /// Run one entry of the identity-verification catalog.
    Verify(verify::VerifyArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Top::Compute { what } => compute::run(what),
        Top::Verify(args) => verify::run(args),
    };
    std::process::exit(code);
}
