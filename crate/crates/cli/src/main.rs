//! Reproducible experiments around Hermite-basis feature forecasting:
//! trajectory simulation, schedule runs, error-ratio campaigns, normality
//! screening and contraction-factor ablations. Every command is
//! deterministic given its full flag set; outputs are written atomically.

mod commands;
mod config_file;
mod generator_args;
mod output;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hicache",
    version,
    about = "Hermite-basis feature forecasting experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic feature trajectory and write a trace file.
    Simulate(commands::simulate::SimulateArgs),
    /// Run the caching schedule over a trace; emit per-step errors and a summary.
    Predict(commands::predict::PredictArgs),
    /// Error-ratio campaign: monomial vs Hermite basis over seeded trajectories.
    Compare(commands::compare::CompareArgs),
    /// Energy-test normality screening of finite-difference samples.
    GaussTest(commands::gauss_test::GaussTestArgs),
    /// Contraction-factor sweep at fixed interval and order.
    AblateSigma(commands::ablate_sigma::AblateSigmaArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Predict(args) => commands::predict::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::GaussTest(args) => commands::gauss_test::run(args),
        Command::AblateSigma(args) => commands::ablate_sigma::run(args),
    };
    if let Err(error) = result {
        eprintln!("error: {error:#}");
        std::process::exit(1);
    }
}
