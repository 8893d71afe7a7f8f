//! Library side of the `bgumbel` command: argument definitions, subcommand
//! drivers and the report types they write.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure,
//! 4 a fit did not converge (the partial report is still written).

use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub mod args;
pub mod error;
pub mod eval;
pub mod fit;
pub mod io;
pub mod manifest;
pub mod sample;
pub mod simulate;

/// How a successful command finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    /// The report was written but at least one model failed numerically.
    FitFailed,
    NotConverged,
}

#[derive(Debug, Parser)]
#[command(name = "bgumbel", version, about = "Bimodal Gumbel distribution toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate pdf, cdf, hazard, moments or shape for fixed parameters.
    Eval(eval::EvalArgs),
    /// Draw a sample by Metropolis-Hastings or the mixture representation.
    Sample(sample::SampleArgs),
    /// Rerun the four-row sample-versus-population moment study.
    #[command(alias = "simulate-table1")]
    Simulate(simulate::SimulateArgs),
    /// Fit BG and/or Gumbel models to a column of data.
    Fit(fit::FitArgs),
}

/// Runs a parsed command line, reporting errors on stderr.
pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Eval(a) => eval::run(&a),
        Command::Sample(a) => sample::run(&a),
        Command::Simulate(a) => simulate::run(&a),
        Command::Fit(a) => fit::run(&a),
    };
    if let Err(e) = &result {
        eprintln!("bgumbel: {e}");
    }
    ExitCode::from(exit_code(&result))
}

pub fn exit_code(result: &error::Result<Status>) -> u8 {
    match result {
        Ok(Status::Done) => 0,
        Ok(Status::FitFailed) => 3,
        Ok(Status::NotConverged) => 4,
        Err(e) => e.exit_code(),
    }
}
