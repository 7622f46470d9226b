//! Command line front end for `bowtie-core`: expansion files, verification
//! suites and their JSON reports.
//!
//! Exit codes: 0 pass (or the expected failure of the Klingen control), 1 an
//! identity is violated, 2 usage, configuration or I/O error, 3 a numeric
//! parameter or point lies outside the domain.

pub mod args;
pub mod error;
pub mod exec;
pub mod format;
pub mod suites;

use std::path::Path;

use bowtie_core::elliptic::eisenstein_qexp;
use bowtie_core::siegel2::siegel_eisenstein2;
use serde_json::json;

pub use args::{CheckArgs, Cli, Command, ExpandArgs, ExpandKind, Suite, SuiteConfig, VariantChoice};
pub use error::{CliError, EXIT_CONFIG, EXIT_DOMAIN, EXIT_PASS, EXIT_VIOLATION};
pub use exec::Threaded;
pub use format::{BowtieReportFile, QExpansionFile, SiegelExpansionFile};
pub use suites::{run_suite, Outcome, Status};

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Expand(args) => match expand(&args) {
            Ok(()) => EXIT_PASS,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Check(args) => check(&args),
    }
}

pub fn expand(args: &ExpandArgs) -> Result<(), CliError> {
    let text = match args.kind {
        ExpandKind::Elliptic => format::to_json(&QExpansionFile::from_expansion(&eisenstein_qexp(args.k, args.bound)?)),
        ExpandKind::Siegel => {
            format::to_json(&SiegelExpansionFile::from_expansion(&siegel_eisenstein2(args.k, args.bound)?))
        }
    };
    match &args.out {
        Some(path) => format::write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a suite and writes its report. A report is written even when the
/// configuration is rejected, with status `"error"`.
pub fn check(args: &CheckArgs) -> u8 {
    let outcome = Threaded::from_env().and_then(|exec| {
        let cfg = SuiteConfig::resolve(args)?;
        run_suite(&cfg, &exec)
    });
    match outcome {
        Ok(outcome) => {
            if let Err(e) = emit(args.out.as_deref(), &format::to_json(&outcome.report)) {
                eprintln!("error: {e}");
                return EXIT_CONFIG;
            }
            for line in &outcome.summary {
                if args.out.is_some() {
                    println!("{line}");
                } else {
                    eprintln!("{line}");
                }
            }
            outcome.status.exit_code()
        }
        Err(e) => {
            let code = e.exit_code();
            let report = json!({
                "suite": args.suite.name(),
                "status": "error",
                "exit_code": code,
                "error": e.to_string(),
            });
            if let Err(w) = emit(args.out.as_deref(), &format::to_json(&report)) {
                eprintln!("error: {w}");
            }
            eprintln!("error: {e}");
            code
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => format::write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
