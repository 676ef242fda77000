//! Command-line front end for the bosonstat library.
//!
//! Exit codes: 0 success, 1 i/o, 2 usage, 3 validation, 4 numerical.

// Negated float comparisons reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod constants;
mod error;
mod output;

use clap::{Parser, Subcommand};

use crate::error::CliResult;

#[derive(Parser)]
#[command(
    name = "bosonstat",
    version,
    about = "Photon and condensate number statistics, entropies, linewidths and heat-engine budgets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report for one laser operating point: distributions, moments,
    /// entropies, linewidth, entropy flux
    Laser(commands::laser::LaserArgs),
    /// Condensate ground-state statistics and the bulk-gas comparison
    Bec(commands::bec::BecArgs),
    /// Heat-engine budget, Carnot bound and flux inequality from a
    /// scenario file
    Engine(commands::engine_cmd::EngineArgs),
    /// Integrate the diagonal master equation and compare with the
    /// steady state
    Evolve(commands::evolve::EvolveArgs),
    /// The linewidth / entropy-flux table below and above threshold
    Table1(commands::table1::Table1Args),
    /// Sweep pump ratio, reduced temperature, or occupation
    Sweep(commands::sweep::SweepArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Laser(a) => commands::laser::run(a),
        Command::Bec(a) => commands::bec::run(a),
        Command::Engine(a) => commands::engine_cmd::run(a),
        Command::Evolve(a) => commands::evolve::run(a),
        Command::Table1(a) => commands::table1::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
