use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(bowtie_cli::run(bowtie_cli::Cli::parse()))
}
