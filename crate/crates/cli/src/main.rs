mod args;
mod commands;
mod inputs;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    commands::run(args::Cli::parse().command)
}
