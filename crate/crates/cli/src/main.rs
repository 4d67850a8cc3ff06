use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(qiradar_cli::run(qiradar_cli::Cli::parse()))
}
