use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    bgumbel_cli::run(bgumbel_cli::Cli::parse())
}
